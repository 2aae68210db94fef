#pragma once

#include <span>
#include <vector>

#include "cvse/types.hpp"

namespace cvse {

/// Moments of the covariance structure of per-observation CV errors:
/// sigma2 = Var e_i, omega = Cov within a testing fold, gamma = Cov across
/// testing folds, mu = E e_i.
struct CovarianceComponents {
    double sigma2 = 0.0;
    double omega = 0.0;
    double gamma = 0.0;
    double mu = 0.0;
};

/// The folklore estimate: (1/K) times the sample variance (divisor K-1) of
/// the K fold error rates.
double naive_var_err_cvk(std::span<const double> err_k);

/// Closed-form variance of the K-fold error estimate:
/// sigma2/n + (n_K - 1) omega / n + (n - n_K) gamma / n.
double var_decomposition(const CovarianceComponents& comp, int n, int n_K);

/// Bias of naive_var_err_cvk: always -gamma.
double expected_naive_bias(const CovarianceComponents& comp);

/// Expectation of naive_var_err_cvk: sigma2/n + (n_K - 1) omega / n - gamma/K.
double expected_naive_value(const CovarianceComponents& comp, int n, int n_K);

enum class Var3Criterion { Unbiased, Mle };

/// Pooled-fold estimate: (K1 K2)^{-1/2} times the sample variance of all
/// AUC_{k1 k2} entries (divisor K1 K2 - 1).
double var1_cvk(const Matrix& auc_pairs);

/// Matched-fold estimate: (1/K) times the sample variance of AUC_k.
double var2_cvk(std::span<const double> auc_matched);

/// Row/column decomposition around the point estimate. The unbiased criterion
/// uses c1 = 1/(K1 (K1-1)); MLE uses 1/K1^2 (c2 analogously).
double var3_cvk(const Matrix& auc_pairs, double auc_cvk,
                Var3Criterion criterion = Var3Criterion::Unbiased);

// CVKR versions: the matching single-repetition estimate averaged over reps.
double var1_cvkr(const std::vector<Matrix>& per_rep_pairs);
double var2_cvkr(const std::vector<std::vector<double>>& per_rep_matched);
double var3_cvkr(const std::vector<Matrix>& per_rep_pairs, std::span<const double> per_rep_auc,
                 Var3Criterion criterion = Var3Criterion::Unbiased);

/// CVKM estimate: (K1 K2)^{-1/2} times the sample variance (divisor M-1) of
/// the per-repetition testing-fold AUCs.
double var_cvkm(std::span<const double> auc_11m, int K1, int K2);

} // namespace cvse
