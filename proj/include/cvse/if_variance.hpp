#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "cvse/estimators.hpp"
#include "cvse/types.hpp"

namespace cvse {

/// Influence-function decomposition for the CVKM AUC estimator. For each
/// observation the influence value is I + II - III. The source derivation
/// states the sum as I + II + III but derives the terms through the quotient
/// rule, which forces the minus sign; only with the minus sign do II and III
/// cancel exactly in the leave-one-out limit (K = n), and the finite
/// difference of the perturbed functional confirms it. The minus sign is what
/// this module implements.
struct InfluenceComponents {
    std::vector<double> u1, u2;              // I + II - III per observation
    std::vector<double> term1_c1, term2_c1, term3_c1;
    std::vector<double> term1_c2, term2_c2, term3_c2;
    double sd = 0.0;            // sqrt(sum u1^2 / n1^2 + sum u2^2 / n2^2)
    double sd_term1_only = 0.0; // same formula with u = term I alone
};

/// Two-point probability of a realized CV training set when one observation
/// carries perturbed mass eps. in_test_fold selects the closed form for the
/// perturbed observation sitting in the testing fold (excluded from the
/// training set) versus sitting in the training set. At eps = 0 both reduce
/// to 1 / C(n, nK). Requires 0 <= eps < 1 and nK < n.
double g_perturbed(int n, int nK, double eps, bool in_test_fold);

/// d/d eps of g_perturbed at 0, divided by g(0): nK - n when the perturbed
/// observation is in the testing fold, nK otherwise.
double gdot_ratio(int n, int nK, bool in_test_fold);

/// Standard-error estimate of the CVKM AUC via the influence function
/// (terms I, II, III per observation of each class).
InfluenceComponents if_sd_cvkm(const CvAucResult& result, const FoldPlan& plan);

/// Leave-one-out reduction: only term I survives.
double if_sd_cvn_reduction(std::span<const double> per_obs_auc1,
                           std::span<const double> per_obs_auc2, double auc);

/// Error-rate reduction at K = n: the naive sample-variance form
/// sqrt(sum (e_i - mean)^2 / n^2).
double if_sd_err_cvn(std::span<const double> e);

/// The eps-perturbed CVKM functional (sum of A * B / C over pairs with the
/// perturbed empirical weights and perturbed training-set probabilities).
/// At eps = 0 it equals result.auc; its derivative at 0 is the influence
/// value of the perturbed observation. which_class is 1 or 2.
double perturbed_auc_cvkm(const CvAucResult& result, const FoldPlan& plan, double eps,
                          int which_class, int obs);

/// Partial influence pieces for the CVKR estimator. Only term I
/// (AUC_{1i} - AUC^(CVKR)) and the unperturbed whole-partition probability
/// G0 have closed forms; the derivative of the partition probability does
/// not, so no full estimator is offered here.
struct CvkrInfluencePartial {
    std::vector<double> term1_c1, term1_c2;
    double log_g0 = 0.0;
    double g0 = 0.0;
    double sd_term1_only = 0.0;
    const char* note = "partial - G' unknown";
};

CvkrInfluencePartial if_cvkr_partial(const CvAucResult& result);

nlohmann::json influence_to_json(const InfluenceComponents& c);

} // namespace cvse
