#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvse/adhoc_variance.hpp"
#include "cvse/estimators.hpp"

namespace cvse {

/// One Monte-Carlo study cell: two Gaussian classes N(0, I) and N(c 1, I).
struct StudyConfig {
    int n1 = 10;
    int n2 = 10;
    int p = 2;
    double c = -1.0; // < 0 means the default 1.19 / sqrt(p) (Bayes AUC ~ 0.80)
    ClassifierSpec classifier;
    int K = 10;
    int M = 200;  // CVKM repetitions
    int R = 200;  // CVKR repetitions
    int n_mc = 500;
    std::uint64_t seed = 0;
    bool has_seed = false; // simulate mode refuses to run without a seed
    bool run_cvkm = true;
    bool run_cvkr = false;
    bool run_err = false;
    Pairing pairing = Pairing::Full;
    DenPolicy policy = DenPolicy::Strict;
    int workers = 0; // 0 = hardware concurrency

    double c_effective() const;
    void validate() const;
};

StudyConfig study_config_from_json(const nlohmann::json& j);
nlohmann::json study_config_to_json(const StudyConfig& cfg);

/// Everything computed for a single MC trial (NaN when not run).
struct TrialResult {
    double auc_cvkm = std::numeric_limits<double>::quiet_NaN();
    double sd_if = std::numeric_limits<double>::quiet_NaN();
    double sd_if_term1 = std::numeric_limits<double>::quiet_NaN();
    double sqrt_var_cvkm = std::numeric_limits<double>::quiet_NaN();
    double auc_cvkr = std::numeric_limits<double>::quiet_NaN();
    double auc_cvkr_matched = std::numeric_limits<double>::quiet_NaN();
    double sqrt_var1_cvk = std::numeric_limits<double>::quiet_NaN();
    double sqrt_var2_cvk = std::numeric_limits<double>::quiet_NaN();
    double sqrt_var3_cvk = std::numeric_limits<double>::quiet_NaN();
    double sqrt_var1_cvkr = std::numeric_limits<double>::quiet_NaN();
    double sqrt_var2_cvkr = std::numeric_limits<double>::quiet_NaN();
    double sqrt_var3_cvkr = std::numeric_limits<double>::quiet_NaN();
    double err_cvk = std::numeric_limits<double>::quiet_NaN();
    double naive_var_err = std::numeric_limits<double>::quiet_NaN();
    int ridge_activations = 0;
    bool failed = false;
    std::string failure;
};

/// Aggregate behaviour of one standard-error estimator against the MC truth.
struct SeEstimatorStats {
    std::string name;
    std::string estimand; // which point estimator's true SD it targets
    double mean = 0.0;
    double sd = 0.0;
    double bias = 0.0; // mean - trueSD
    double rms = 0.0;  // sqrt(bias^2 + sd^2)
    double se_mean = 0.0;
    // Normalized to the estimand (the Monte-Carlo true SD):
    double norm_bias = 0.0;
    double norm_sd = 0.0;
    double norm_rms = 0.0;
};

struct PointEstimatorStats {
    std::string name;
    double mean = 0.0;
    double true_sd = 0.0; // sample SD across trials: the estimand
    double se_mean = 0.0;
    double se_true_sd = 0.0;
};

struct StudyReport {
    StudyConfig cfg;
    double c_used = 0.0;
    int trials_run = 0;
    int trials_failed = 0;
    long total_ridge_activations = 0;
    std::vector<PointEstimatorStats> points;
    std::vector<SeEstimatorStats> se_estimators;
    std::vector<TrialResult> trials;
};

/// Class 1 ~ N(0, I_p), class 2 ~ N(c 1, I_p); deterministic per
/// (seed, trial_index).
TwoClassDataset generate_dataset(const StudyConfig& cfg, int trial_index);

/// Run the full study. Trials execute on cfg.workers threads; aggregation is
/// a deterministic fold over trial indices. Throws NumericalFailure if more
/// than 1% of trials fail.
StudyReport run_study(const StudyConfig& cfg);

// The trials are split into two disjoint halves: the covariance components
// (and the variance reconstruction built from them) come from the even
// trials, the MC variance and the mean naive estimate from the odd trials.
// Estimating everything from one sample would make the three quantities of
// the bias comparison algebraically dependent -- the pooled-moment identities
// force mean(naive) - MCvar + gamma_hat to an O(1/T) constant with no
// first-order variance -- so the split is what makes "agreement within MC
// standard errors" a real statistical statement.
struct ComponentsReport {
    CovarianceComponents comp;        // estimated on the component half
    double se_gamma = 0.0;
    double mc_var_err = 0.0;          // MC variance of the CVK error estimate
    double se_mc_var = 0.0;
    double mean_naive_var = 0.0;      // mean of the naive estimate
    double se_naive = 0.0;
    double reconstruction = 0.0;      // var_decomposition(comp, n, n_K)
    double se_reconstruction = 0.0;
    double observed_bias = 0.0;       // mean_naive_var - mc_var_err
    double predicted_bias = 0.0;      // -gamma
    double se_bias_match = 0.0;       // SE of (observed_bias - predicted_bias)
    double se_reconstruction_match = 0.0;
    int n = 0;
    int n_K = 0;
    int trials = 0;
    int trials_components = 0;
    int trials_variance = 0;
};

/// Estimate sigma2, omega, gamma from per-trial error vectors of the CVK
/// error estimator, with pair structure read off each trial's fold map.
ComponentsReport estimate_components(const StudyConfig& cfg);

/// Moment engine behind estimate_components, exposed for testing against
/// synthetic error vectors: errors[t] is the pooled e vector of trial t and
/// fold_of[t][i] its pooled fold assignment.
ComponentsReport components_from_errors(const std::vector<std::vector<double>>& errors,
                                        const std::vector<std::vector<int>>& fold_of,
                                        std::span<const double> err_point_estimates,
                                        std::span<const double> naive_vars, int n_K);

/// C(n, n/2) / n^n computed in log space; n must be even and >= 2.
double permutation_ratio(int n);

std::string report_csv(const StudyReport& report);
std::string trials_csv(const StudyReport& report);
nlohmann::json report_json(const StudyReport& report);

} // namespace cvse
