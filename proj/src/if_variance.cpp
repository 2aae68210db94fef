#include "cvse/if_variance.hpp"

#include <cmath>

#include "cvse/core.hpp"

namespace cvse {

namespace {

// Exact binomial coefficient for n <= 62 (fits in 64 bits with 128-bit
// intermediates); lgamma fallback above that.
double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    if (n <= 62) {
        unsigned long long c = 1;
        for (int i = 1; i <= k; ++i) {
            const unsigned __int128 t = static_cast<unsigned __int128>(c) * (n - k + i);
            c = static_cast<unsigned long long>(t / i);
        }
        return static_cast<double>(c);
    }
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

double log_binom(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void check_g_args(int n, int nK) {
    if (n < 2 || nK < 1 || nK >= n)
        throw InvalidInput("g_perturbed: need 1 <= nK < n and n >= 2");
}

} // namespace

double g_perturbed(int n, int nK, double eps, bool in_test_fold) {
    check_g_args(n, nK);
    if (!(eps >= 0.0) || eps >= 1.0) throw InvalidInput("g_perturbed: eps must be in [0, 1)");
    const int t = n - nK; // training-set size
    if (in_test_fold) {
        // All training draws carry mass (1 - eps)/remaining.
        return std::pow(1.0 - eps, t) / binom(n, t);
    }
    // The perturbed observation occupies one of the t training positions.
    double sum = 0.0;
    double pw = 1.0; // (1 - eps)^(r-1)
    for (int r = 1; r <= t; ++r) {
        sum += pw * (eps * n - r * eps + 1.0);
        pw *= 1.0 - eps;
    }
    return sum / (static_cast<double>(t) * binom(n, t));
}

double gdot_ratio(int n, int nK, bool in_test_fold) {
    check_g_args(n, nK);
    return in_test_fold ? static_cast<double>(nK - n) : static_cast<double>(nK);
}

InfluenceComponents if_sd_cvkm(const CvAucResult& result, const FoldPlan& plan) {
    if (result.mode != CvMode::CVKM)
        throw InvalidInput("if_sd_cvkm: result must come from auc_cvkm");
    const RepetitionScores& reps = result.reps;
    const int n1 = reps.n1;
    const int n2 = reps.n2;
    const int M = reps.M;
    if (plan.n_reps() != M || plan.n1() != n1 || plan.n2() != n2)
        throw InvalidInput("if_sd_cvkm: plan does not match the result");
    const int n1K = static_cast<int>(plan.reps.front().class1.members(0).size());
    const int n2K = static_cast<int>(plan.reps.front().class2.members(0).size());

    // Triple-indicator sums: for a perturbed observation o, restricted to
    // repetitions whose testing fold contains o,
    //   t_psi[o][pair] = sum of I*I*psi,  t_cnt[o][pair] = sum of I*I.
    // These carry all of the m-dependence of gdot_ratio, which takes only two
    // values (nK - n in the testing fold, nK outside).
    const std::size_t cells = static_cast<std::size_t>(n1) * n2;
    std::vector<double> t_psi1(static_cast<std::size_t>(n1) * cells, 0.0);
    std::vector<double> t_cnt1(static_cast<std::size_t>(n1) * cells, 0.0);
    std::vector<double> t_psi2(static_cast<std::size_t>(n2) * cells, 0.0);
    std::vector<double> t_cnt2(static_cast<std::size_t>(n2) * cells, 0.0);

    for (int m = 0; m < M; ++m) {
        const auto test1 = plan.reps[m].class1.members(0);
        const auto test2 = plan.reps[m].class2.members(0);
        for (int a : test1) {
            const double sa = reps.scores1(m, a);
            for (int b : test2) {
                const double p = psi(sa, reps.scores2(m, b));
                const std::size_t cell = static_cast<std::size_t>(a) * n2 + b;
                for (int o : test1) {
                    t_psi1[o * cells + cell] += p;
                    t_cnt1[o * cells + cell] += 1.0;
                }
                for (int o : test2) {
                    t_psi2[o * cells + cell] += p;
                    t_cnt2[o * cells + cell] += 1.0;
                }
            }
        }
    }

    // Mean pair ratio with the same normalization as the II/III sums.
    double mean_ratio = 0.0;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            if (result.table.den(i, j) > 0.0)
                mean_ratio += result.table.num(i, j) / result.table.den(i, j);
    mean_ratio /= static_cast<double>(n1) * n2;

    InfluenceComponents out;
    out.term1_c1.resize(n1);
    out.term2_c1.resize(n1);
    out.term3_c1.resize(n1);
    out.u1.resize(n1);
    out.term1_c2.resize(n2);
    out.term2_c2.resize(n2);
    out.term3_c2.resize(n2);
    out.u2.resize(n2);

    auto fill_class = [&](int count, int other_count, int nK, const std::vector<double>& t_psi,
                          const std::vector<double>& t_cnt, const std::vector<double>& per_obs,
                          std::vector<double>& term1, std::vector<double>& term2,
                          std::vector<double>& term3, std::vector<double>& u) {
        for (int o = 0; o < count; ++o) {
            double s_ratio = 0.0;  // sum of t_psi / den
            double s_mixed = 0.0;  // sum of num * t_cnt / den^2
            const double* tp = t_psi.data() + static_cast<std::size_t>(o) * cells;
            const double* tc = t_cnt.data() + static_cast<std::size_t>(o) * cells;
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n2; ++j) {
                    const double den = result.table.den(i, j);
                    if (den <= 0.0) continue;
                    const std::size_t cell = static_cast<std::size_t>(i) * n2 + j;
                    s_ratio += tp[cell] / den;
                    s_mixed += result.table.num(i, j) * tc[cell] / (den * den);
                }
            term1[o] = per_obs[o] - result.auc;
            term2[o] = nK * mean_ratio - s_ratio / other_count;
            term3[o] = nK * mean_ratio - s_mixed / other_count;
            u[o] = term1[o] + (term2[o] - term3[o]);
        }
    };

    fill_class(n1, n2, n1K, t_psi1, t_cnt1, result.per_obs_auc1, out.term1_c1, out.term2_c1,
               out.term3_c1, out.u1);
    fill_class(n2, n1, n2K, t_psi2, t_cnt2, result.per_obs_auc2, out.term1_c2, out.term2_c2,
               out.term3_c2, out.u2);

    auto sd_of = [&](const std::vector<double>& u1, const std::vector<double>& u2) {
        double s1 = 0.0, s2 = 0.0;
        for (double u : u1) s1 += u * u;
        for (double u : u2) s2 += u * u;
        return std::sqrt(s1 / (static_cast<double>(n1) * n1) +
                         s2 / (static_cast<double>(n2) * n2));
    };
    out.sd = sd_of(out.u1, out.u2);
    out.sd_term1_only = sd_of(out.term1_c1, out.term1_c2);
    return out;
}

double if_sd_cvn_reduction(std::span<const double> per_obs_auc1,
                           std::span<const double> per_obs_auc2, double auc) {
    if (per_obs_auc1.empty() || per_obs_auc2.empty())
        throw InvalidInput("if_sd_cvn_reduction: empty per-observation vectors");
    const double n1 = static_cast<double>(per_obs_auc1.size());
    const double n2 = static_cast<double>(per_obs_auc2.size());
    double s1 = 0.0, s2 = 0.0;
    for (double a : per_obs_auc1) {
        const double u = a - auc;
        s1 += u * u;
    }
    for (double a : per_obs_auc2) {
        const double u = a - auc;
        s2 += u * u;
    }
    return std::sqrt(s1 / (n1 * n1) + s2 / (n2 * n2));
}

double if_sd_err_cvn(std::span<const double> e) {
    if (e.empty()) throw InvalidInput("if_sd_err_cvn: empty error vector");
    const double n = static_cast<double>(e.size());
    double mean = 0.0;
    for (double x : e) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : e) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n * n));
}

double perturbed_auc_cvkm(const CvAucResult& result, const FoldPlan& plan, double eps,
                          int which_class, int obs) {
    if (result.mode != CvMode::CVKM)
        throw InvalidInput("perturbed_auc_cvkm: result must come from auc_cvkm");
    if (!(eps >= 0.0) || eps >= 1.0)
        throw InvalidInput("perturbed_auc_cvkm: eps must be in [0, 1)");
    if (which_class != 1 && which_class != 2)
        throw InvalidInput("perturbed_auc_cvkm: which_class must be 1 or 2");
    if (result.skipped_pairs > 0)
        throw CoverageError("perturbed_auc_cvkm: requires full pair coverage");
    const RepetitionScores& reps = result.reps;
    const int n1 = reps.n1;
    const int n2 = reps.n2;
    const int M = reps.M;
    if (plan.n_reps() != M || plan.n1() != n1 || plan.n2() != n2)
        throw InvalidInput("perturbed_auc_cvkm: plan does not match the result");
    const int n_pert = which_class == 1 ? n1 : n2;
    if (obs < 0 || obs >= n_pert) throw InvalidInput("perturbed_auc_cvkm: observation index");
    const int nK =
        static_cast<int>((which_class == 1 ? plan.reps.front().class1 : plan.reps.front().class2)
                             .members(0)
                             .size());

    // Only the perturbed class's partition probability depends on eps; the
    // other class's factor is a constant that cancels in B/C, so it is set
    // to 1 here.
    const double g_test = g_perturbed(n_pert, nK, eps, true);
    const double g_train = g_perturbed(n_pert, nK, eps, false);

    Matrix b_num = Matrix::Zero(n1, n2);
    Matrix c_den = Matrix::Zero(n1, n2);
    for (int m = 0; m < M; ++m) {
        const auto test1 = plan.reps[m].class1.members(0);
        const auto test2 = plan.reps[m].class2.members(0);
        const bool in_test =
            which_class == 1 ? reps.in_test1(m, obs) : reps.in_test2(m, obs);
        const double g = in_test ? g_test : g_train;
        for (int a : test1) {
            const double sa = reps.scores1(m, a);
            for (int b : test2) {
                b_num(a, b) += psi(sa, reps.scores2(m, b)) * g;
                c_den(a, b) += g;
            }
        }
    }

    double total = 0.0;
    for (int i = 0; i < n1; ++i) {
        const double f1 =
            which_class == 1 ? (1.0 - eps) / n1 + (i == obs ? eps : 0.0) : 1.0 / n1;
        for (int j = 0; j < n2; ++j) {
            const double f2 =
                which_class == 2 ? (1.0 - eps) / n2 + (j == obs ? eps : 0.0) : 1.0 / n2;
            total += f1 * f2 * b_num(i, j) / c_den(i, j);
        }
    }
    return total;
}

CvkrInfluencePartial if_cvkr_partial(const CvAucResult& result) {
    if (result.mode != CvMode::CVKR || result.pairing != Pairing::Full)
        throw InvalidInput("if_cvkr_partial: needs a full-pairing CVKR result");
    const int n1 = static_cast<int>(result.per_obs_auc1.size());
    const int n2 = static_cast<int>(result.per_obs_auc2.size());
    if (n1 == 0 || n2 == 0) throw InvalidInput("if_cvkr_partial: missing per-observation AUCs");

    CvkrInfluencePartial out;
    out.term1_c1.resize(n1);
    out.term1_c2.resize(n2);
    for (int i = 0; i < n1; ++i) out.term1_c1[i] = result.per_obs_auc1[i] - result.auc;
    for (int j = 0; j < n2; ++j) out.term1_c2[j] = result.per_obs_auc2[j] - result.auc;

    const int n1K = n1 / result.K1;
    const int n2K = n2 / result.K2;
    double log_g0 = 0.0;
    for (int k = 0; k < result.K1; ++k) log_g0 -= log_binom(n1 - k * n1K, n1K);
    for (int k = 0; k < result.K2; ++k) log_g0 -= log_binom(n2 - k * n2K, n2K);
    out.log_g0 = log_g0;
    out.g0 = std::exp(log_g0);

    double s1 = 0.0, s2 = 0.0;
    for (double u : out.term1_c1) s1 += u * u;
    for (double u : out.term1_c2) s2 += u * u;
    out.sd_term1_only = std::sqrt(s1 / (static_cast<double>(n1) * n1) +
                                  s2 / (static_cast<double>(n2) * n2));
    return out;
}

nlohmann::json influence_to_json(const InfluenceComponents& c) {
    nlohmann::json j;
    j["sd"] = c.sd;
    j["sd_term1_only"] = c.sd_term1_only;
    j["class1"] = {{"u", c.u1},
                   {"term1", c.term1_c1},
                   {"term2", c.term2_c1},
                   {"term3", c.term3_c1}};
    j["class2"] = {{"u", c.u2},
                   {"term1", c.term1_c2},
                   {"term2", c.term2_c2},
                   {"term3", c.term3_c2}};
    return j;
}

} // namespace cvse
