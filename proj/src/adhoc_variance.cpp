#include "cvse/adhoc_variance.hpp"

#include <cmath>

#include "cvse/errors.hpp"

namespace cvse {

namespace {

double sample_variance(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n < 2) throw InvalidInput("sample variance needs at least 2 values");
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(n - 1);
}

} // namespace

double naive_var_err_cvk(std::span<const double> err_k) {
    if (err_k.size() < 2) throw InvalidInput("naive_var_err_cvk: K must be >= 2");
    return sample_variance(err_k) / static_cast<double>(err_k.size());
}

double var_decomposition(const CovarianceComponents& comp, int n, int n_K) {
    if (n < 2 || n_K < 1 || n_K > n) throw InvalidInput("var_decomposition: bad counts");
    const double nd = n;
    return comp.sigma2 / nd + (n_K - 1) * comp.omega / nd + (n - n_K) * comp.gamma / nd;
}

double expected_naive_bias(const CovarianceComponents& comp) { return -comp.gamma; }

double expected_naive_value(const CovarianceComponents& comp, int n, int n_K) {
    if (n < 2 || n_K < 1 || n_K > n || n % n_K != 0)
        throw InvalidInput("expected_naive_value: bad counts");
    const double K = static_cast<double>(n) / n_K;
    return comp.sigma2 / n + (n_K - 1) * comp.omega / n - comp.gamma / K;
}

double var1_cvk(const Matrix& auc_pairs) {
    const long count = auc_pairs.size();
    if (count < 2) throw InvalidInput("var1_cvk: need at least 2 fold pairs");
    std::vector<double> pool(auc_pairs.data(), auc_pairs.data() + count);
    return sample_variance(pool) / std::sqrt(static_cast<double>(count));
}

double var2_cvk(std::span<const double> auc_matched) {
    if (auc_matched.size() < 2) throw InvalidInput("var2_cvk: K must be >= 2");
    return sample_variance(auc_matched) / static_cast<double>(auc_matched.size());
}

double var3_cvk(const Matrix& auc_pairs, double auc_cvk, Var3Criterion criterion) {
    const int K1 = static_cast<int>(auc_pairs.rows());
    const int K2 = static_cast<int>(auc_pairs.cols());
    if (K1 < 2 || K2 < 2) throw InvalidInput("var3_cvk: need K1, K2 >= 2");
    const double c1 = criterion == Var3Criterion::Unbiased
                          ? 1.0 / (static_cast<double>(K1) * (K1 - 1))
                          : 1.0 / (static_cast<double>(K1) * K1);
    const double c2 = criterion == Var3Criterion::Unbiased
                          ? 1.0 / (static_cast<double>(K2) * (K2 - 1))
                          : 1.0 / (static_cast<double>(K2) * K2);
    double rows = 0.0;
    for (int k1 = 0; k1 < K1; ++k1) {
        const double d = auc_pairs.row(k1).mean() - auc_cvk;
        rows += d * d;
    }
    double cols = 0.0;
    for (int k2 = 0; k2 < K2; ++k2) {
        const double d = auc_pairs.col(k2).mean() - auc_cvk;
        cols += d * d;
    }
    return c1 * rows + c2 * cols;
}

double var1_cvkr(const std::vector<Matrix>& per_rep_pairs) {
    if (per_rep_pairs.empty()) throw InvalidInput("var1_cvkr: no repetitions");
    double total = 0.0;
    for (const auto& pairs : per_rep_pairs) total += var1_cvk(pairs);
    return total / static_cast<double>(per_rep_pairs.size());
}

double var2_cvkr(const std::vector<std::vector<double>>& per_rep_matched) {
    if (per_rep_matched.empty()) throw InvalidInput("var2_cvkr: no repetitions");
    double total = 0.0;
    for (const auto& matched : per_rep_matched) total += var2_cvk(matched);
    return total / static_cast<double>(per_rep_matched.size());
}

double var3_cvkr(const std::vector<Matrix>& per_rep_pairs, std::span<const double> per_rep_auc,
                 Var3Criterion criterion) {
    if (per_rep_pairs.empty() || per_rep_pairs.size() != per_rep_auc.size())
        throw InvalidInput("var3_cvkr: repetition inputs disagree");
    double total = 0.0;
    for (std::size_t r = 0; r < per_rep_pairs.size(); ++r)
        total += var3_cvk(per_rep_pairs[r], per_rep_auc[r], criterion);
    return total / static_cast<double>(per_rep_pairs.size());
}

double var_cvkm(std::span<const double> auc_11m, int K1, int K2) {
    if (auc_11m.size() < 2) throw InvalidInput("var_cvkm: M must be >= 2");
    if (K1 < 2 || K2 < 2) throw InvalidInput("var_cvkm: fold counts must be >= 2");
    return sample_variance(auc_11m) / std::sqrt(static_cast<double>(K1) * K2);
}

} // namespace cvse
