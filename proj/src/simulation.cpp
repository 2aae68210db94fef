#include "cvse/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

#include "cvse/adhoc_variance.hpp"
#include "cvse/if_variance.hpp"
#include "cvse/resampling.hpp"
#include "cvse/rng.hpp"

namespace cvse {

namespace {

// Per-trial substreams: five ids per trial so datasets and the three plan
// seeds are independent and order-free.
enum TrialStream : std::uint64_t {
    kData1 = 0,
    kData2 = 1,
    kPlanCvkm = 2,
    kPlanCvkr = 3,
    kPlanErr = 4,
    kStride = 5
};

std::uint64_t trial_stream(int trial, TrialStream which) {
    return kStride * static_cast<std::uint64_t>(trial) + which;
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

double StudyConfig::c_effective() const {
    return c < 0.0 ? 1.19 / std::sqrt(static_cast<double>(p)) : c;
}

void StudyConfig::validate() const {
    if (n1 < 2 || n2 < 2) throw InvalidInput("config: class sizes must be >= 2");
    if (p < 1) throw InvalidInput("config: p must be >= 1");
    if (K < 2 || K > std::min(n1, n2)) throw InvalidInput("config: K out of range");
    if (n1 % K != 0 || n2 % K != 0)
        throw InvalidInput("config: K must divide both class sizes");
    if (M < 2 || R < 1) throw InvalidInput("config: M must be >= 2 and R >= 1");
    if (n_mc < 2) throw InvalidInput("config: n_mc must be >= 2");
    if (!run_cvkm && !run_cvkr && !run_err)
        throw InvalidInput("config: no estimator selected");
    if (classifier.ridge < 0.0) throw InvalidInput("config: ridge must be non-negative");
    if (workers < 0) throw InvalidInput("config: workers must be >= 0");
}

StudyConfig study_config_from_json(const nlohmann::json& j) {
    StudyConfig cfg;
    cfg.n1 = j.value("n1", cfg.n1);
    cfg.n2 = j.value("n2", cfg.n2);
    cfg.p = j.value("p", cfg.p);
    cfg.c = j.value("c", cfg.c);
    if (j.contains("classifier")) {
        const auto& c = j.at("classifier");
        cfg.classifier.kind = classifier_kind_from_string(c.value("kind", "lda"));
        cfg.classifier.ridge = c.value("ridge", 0.0);
    }
    cfg.K = j.value("K", cfg.K);
    cfg.M = j.value("M", cfg.M);
    cfg.R = j.value("R", cfg.R);
    cfg.n_mc = j.value("n_mc", cfg.n_mc);
    if (j.contains("seed")) {
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.has_seed = true;
    }
    if (j.contains("estimators")) {
        cfg.run_cvkm = cfg.run_cvkr = cfg.run_err = false;
        for (const auto& e : j.at("estimators")) {
            const std::string name = e.get<std::string>();
            if (name == "cvkm")
                cfg.run_cvkm = true;
            else if (name == "cvkr")
                cfg.run_cvkr = true;
            else if (name == "err")
                cfg.run_err = true;
            else
                throw InvalidInput("config: unknown estimator '" + name + "'");
        }
    }
    const std::string pairing = j.value("pairing", "full");
    if (pairing == "full")
        cfg.pairing = Pairing::Full;
    else if (pairing == "matched")
        cfg.pairing = Pairing::Matched;
    else
        throw InvalidInput("config: pairing must be full or matched");
    const std::string policy = j.value("policy", "strict");
    if (policy == "strict")
        cfg.policy = DenPolicy::Strict;
    else if (policy == "skip")
        cfg.policy = DenPolicy::Skip;
    else
        throw InvalidInput("config: policy must be strict or skip");
    cfg.workers = j.value("workers", 0);
    return cfg;
}

nlohmann::json study_config_to_json(const StudyConfig& cfg) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["n1"] = cfg.n1;
    j["n2"] = cfg.n2;
    j["p"] = cfg.p;
    j["c"] = cfg.c_effective();
    j["classifier"] = {{"kind", to_string(cfg.classifier.kind)},
                       {"ridge", cfg.classifier.ridge}};
    j["K"] = cfg.K;
    j["M"] = cfg.M;
    j["R"] = cfg.R;
    j["n_mc"] = cfg.n_mc;
    j["seed"] = cfg.seed;
    auto est = nlohmann::json::array();
    if (cfg.run_cvkm) est.push_back("cvkm");
    if (cfg.run_cvkr) est.push_back("cvkr");
    if (cfg.run_err) est.push_back("err");
    j["estimators"] = est;
    j["pairing"] = to_string(cfg.pairing);
    j["policy"] = cfg.policy == DenPolicy::Strict ? "strict" : "skip";
    j["workers"] = cfg.workers;
    return j;
}

TwoClassDataset generate_dataset(const StudyConfig& cfg, int trial_index) {
    const double c = cfg.c_effective();
    rng::Stream s1(cfg.seed, trial_stream(trial_index, kData1));
    rng::Stream s2(cfg.seed, trial_stream(trial_index, kData2));
    Matrix x1(cfg.n1, cfg.p), x2(cfg.n2, cfg.p);
    for (int i = 0; i < cfg.n1; ++i)
        for (int d = 0; d < cfg.p; ++d) x1(i, d) = s1.gaussian();
    for (int j = 0; j < cfg.n2; ++j)
        for (int d = 0; d < cfg.p; ++d) x2(j, d) = c + s2.gaussian();
    return TwoClassDataset(std::move(x1), std::move(x2));
}

namespace {

TrialResult run_one_trial(const StudyConfig& cfg, int t) {
    TrialResult out;
    try {
        const TwoClassDataset data = generate_dataset(cfg, t);
        if (cfg.run_cvkm) {
            const std::uint64_t plan_seed =
                rng::Stream(cfg.seed, trial_stream(t, kPlanCvkm)).next_u64();
            const FoldPlan plan = plan_cvkm(cfg.n1, cfg.n2, cfg.K, cfg.M, plan_seed);
            const CvAucResult res = auc_cvkm(data, cfg.classifier, plan, cfg.policy);
            out.auc_cvkm = res.auc;
            out.ridge_activations += res.ridge_activations;
            const InfluenceComponents inf = if_sd_cvkm(res, plan);
            out.sd_if = inf.sd;
            out.sd_if_term1 = inf.sd_term1_only;
            out.sqrt_var_cvkm = std::sqrt(var_cvkm(res.auc_11m, res.K1, res.K2));
        }
        if (cfg.run_cvkr) {
            const std::uint64_t plan_seed =
                rng::Stream(cfg.seed, trial_stream(t, kPlanCvkr)).next_u64();
            const FoldPlan plan = plan_cvkr(cfg.n1, cfg.n2, cfg.K, cfg.R, plan_seed);
            if (cfg.pairing == Pairing::Full) {
                const CvAucResult res = auc_cvkr(data, cfg.classifier, plan, Pairing::Full);
                out.auc_cvkr = res.auc;
                out.ridge_activations += res.ridge_activations;
                out.sqrt_var1_cvk = std::sqrt(var1_cvk(res.per_rep_fold_auc.front()));
                out.sqrt_var2_cvk = std::sqrt(var2_cvk(res.per_rep_matched_auc.front()));
                out.sqrt_var3_cvk =
                    std::sqrt(var3_cvk(res.per_rep_fold_auc.front(), res.per_rep_auc.front()));
                out.sqrt_var1_cvkr = std::sqrt(var1_cvkr(res.per_rep_fold_auc));
                out.sqrt_var2_cvkr = std::sqrt(var2_cvkr(res.per_rep_matched_auc));
                out.sqrt_var3_cvkr =
                    std::sqrt(var3_cvkr(res.per_rep_fold_auc, res.per_rep_auc));
                double matched_total = 0.0;
                for (const auto& m : res.per_rep_matched_auc) matched_total += mean_of(m);
                out.auc_cvkr_matched = matched_total / res.per_rep_matched_auc.size();
            } else {
                const CvAucResult res = auc_cvkr(data, cfg.classifier, plan, Pairing::Matched);
                out.auc_cvkr_matched = res.auc;
                out.ridge_activations += res.ridge_activations;
                out.sqrt_var2_cvk = std::sqrt(var2_cvk(res.per_rep_matched_auc.front()));
                out.sqrt_var2_cvkr = std::sqrt(var2_cvkr(res.per_rep_matched_auc));
            }
        }
        if (cfg.run_err) {
            const std::uint64_t plan_seed =
                rng::Stream(cfg.seed, trial_stream(t, kPlanErr)).next_u64();
            const FoldPlan plan = plan_cvk(cfg.n1, cfg.n2, cfg.K, cfg.K, plan_seed);
            const CvErrResult er = err_cvk(data, cfg.classifier, plan);
            out.err_cvk = er.err;
            out.naive_var_err = naive_var_err_cvk(er.per_fold_error);
            out.ridge_activations += er.ridge_activations;
        }
    } catch (const std::exception& e) {
        out.failed = true;
        out.failure = e.what();
    }
    return out;
}

struct Series {
    std::string name;
    std::string estimand;
    std::vector<double> values;
};

void collect(std::vector<Series>& dst, const std::string& name, const std::string& estimand,
             const std::vector<TrialResult>& trials, double TrialResult::* member) {
    Series s;
    s.name = name;
    s.estimand = estimand;
    for (const auto& t : trials)
        if (!t.failed) s.values.push_back(t.*member);
    if (!s.values.empty() && std::isfinite(s.values.front())) dst.push_back(std::move(s));
}

} // namespace

StudyReport run_study(const StudyConfig& cfg) {
    cfg.validate();
    if (!cfg.has_seed) throw InvalidInput("run_study: a seed is required");

    StudyReport report;
    report.cfg = cfg;
    report.c_used = cfg.c_effective();
    report.trials.assign(cfg.n_mc, TrialResult{});

    int workers = cfg.workers > 0 ? cfg.workers
                                  : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, cfg.n_mc));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= cfg.n_mc) return;
            report.trials[t] = run_one_trial(cfg, t);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    report.trials_run = cfg.n_mc;
    for (const auto& t : report.trials) {
        if (t.failed) ++report.trials_failed;
        report.total_ridge_activations += t.ridge_activations;
    }
    if (report.trials_failed * 100 > cfg.n_mc) {
        std::string first;
        for (const auto& t : report.trials)
            if (t.failed) {
                first = t.failure;
                break;
            }
        throw NumericalFailure("run_study: " + std::to_string(report.trials_failed) + "/" +
                               std::to_string(cfg.n_mc) +
                               " trials failed (> 1%); first failure: " + first);
    }

    std::vector<Series> points;
    collect(points, "auc_cvkm", "", report.trials, &TrialResult::auc_cvkm);
    collect(points, "auc_cvkr", "", report.trials, &TrialResult::auc_cvkr);
    collect(points, "auc_cvkr_matched", "", report.trials, &TrialResult::auc_cvkr_matched);
    collect(points, "err_cvk", "", report.trials, &TrialResult::err_cvk);
    for (const auto& s : points) {
        PointEstimatorStats st;
        st.name = s.name;
        st.mean = mean_of(s.values);
        st.true_sd = sample_sd(s.values);
        const double T = static_cast<double>(s.values.size());
        st.se_mean = st.true_sd / std::sqrt(T);
        st.se_true_sd = st.true_sd / std::sqrt(2.0 * (T - 1.0));
        report.points.push_back(st);
    }
    auto true_sd_of = [&](const std::string& name) -> double {
        for (const auto& p : report.points)
            if (p.name == name) return p.true_sd;
        return std::numeric_limits<double>::quiet_NaN();
    };

    std::vector<Series> ses;
    collect(ses, "sd_if", "auc_cvkm", report.trials, &TrialResult::sd_if);
    collect(ses, "sd_if_term1", "auc_cvkm", report.trials, &TrialResult::sd_if_term1);
    collect(ses, "sqrt_var_cvkm", "auc_cvkm", report.trials, &TrialResult::sqrt_var_cvkm);
    const std::string cvkr_target =
        cfg.pairing == Pairing::Full ? "auc_cvkr" : "auc_cvkr_matched";
    collect(ses, "sqrt_var1_cvk", cvkr_target, report.trials, &TrialResult::sqrt_var1_cvk);
    collect(ses, "sqrt_var2_cvk", cvkr_target, report.trials, &TrialResult::sqrt_var2_cvk);
    collect(ses, "sqrt_var3_cvk", cvkr_target, report.trials, &TrialResult::sqrt_var3_cvk);
    collect(ses, "sqrt_var1_cvkr", cvkr_target, report.trials, &TrialResult::sqrt_var1_cvkr);
    collect(ses, "sqrt_var2_cvkr", cvkr_target, report.trials, &TrialResult::sqrt_var2_cvkr);
    collect(ses, "sqrt_var3_cvkr", cvkr_target, report.trials, &TrialResult::sqrt_var3_cvkr);
    collect(ses, "sqrt_naive_var_err", "err_cvk", report.trials, &TrialResult::naive_var_err);
    for (auto& s : ses) {
        if (s.name == "sqrt_naive_var_err")
            for (double& v : s.values) v = std::sqrt(v);
        SeEstimatorStats st;
        st.name = s.name;
        st.estimand = s.estimand;
        st.mean = mean_of(s.values);
        st.sd = sample_sd(s.values);
        const double true_sd = true_sd_of(s.estimand);
        st.bias = st.mean - true_sd;
        st.rms = std::sqrt(st.bias * st.bias + st.sd * st.sd);
        st.se_mean = st.sd / std::sqrt(static_cast<double>(s.values.size()));
        st.norm_bias = st.bias / true_sd;
        st.norm_sd = st.sd / true_sd;
        st.norm_rms = st.rms / true_sd;
        report.se_estimators.push_back(st);
    }
    return report;
}

ComponentsReport components_from_errors(const std::vector<std::vector<double>>& errors,
                                        const std::vector<std::vector<int>>& fold_of,
                                        std::span<const double> err_point_estimates,
                                        std::span<const double> naive_vars, int n_K) {
    const std::size_t T = errors.size();
    if (T < 4 || fold_of.size() != T || err_point_estimates.size() != T ||
        naive_vars.size() != T)
        throw InvalidInput("components_from_errors: needs >= 4 consistent trials");
    const int n = static_cast<int>(errors.front().size());

    std::vector<double> e_bar(T), e_sq(T), within(T), cross(T);
    for (std::size_t t = 0; t < T; ++t) {
        const auto& e = errors[t];
        const auto& f = fold_of[t];
        if (static_cast<int>(e.size()) != n || f.size() != e.size())
            throw InvalidInput("components_from_errors: ragged trial vectors");
        double s = 0.0, sq = 0.0, w = 0.0, g = 0.0;
        long wn = 0, gn = 0;
        for (int i = 0; i < n; ++i) {
            s += e[i];
            sq += e[i] * e[i];
            for (int j = i + 1; j < n; ++j) {
                if (f[i] == f[j]) {
                    w += e[i] * e[j];
                    ++wn;
                } else {
                    g += e[i] * e[j];
                    ++gn;
                }
            }
        }
        e_bar[t] = s / n;
        e_sq[t] = sq / n;
        within[t] = wn > 0 ? w / static_cast<double>(wn) : 0.0;
        cross[t] = gn > 0 ? g / static_cast<double>(gn) : 0.0;
    }

    ComponentsReport rep;
    rep.n = n;
    rep.n_K = n_K;
    rep.trials = static_cast<int>(T);

    // Component half: even trials.
    std::vector<double> a_bar, a_sq, a_within, a_cross;
    // Variance half: odd trials.
    std::vector<double> b_err, b_naive;
    for (std::size_t t = 0; t < T; ++t) {
        if (t % 2 == 0) {
            a_bar.push_back(e_bar[t]);
            a_sq.push_back(e_sq[t]);
            a_within.push_back(within[t]);
            a_cross.push_back(cross[t]);
        } else {
            b_err.push_back(err_point_estimates[t]);
            b_naive.push_back(naive_vars[t]);
        }
    }
    rep.trials_components = static_cast<int>(a_bar.size());
    rep.trials_variance = static_cast<int>(b_err.size());
    const double ta = static_cast<double>(a_bar.size());
    const double tb = static_cast<double>(b_err.size());

    const double mu = mean_of(a_bar);
    const double s_bar = mean_of(a_sq);
    const double w_bar = mean_of(a_within);
    const double g_bar = mean_of(a_cross);
    rep.comp.mu = mu;
    rep.comp.sigma2 = s_bar - mu * mu;
    rep.comp.omega = w_bar - mu * mu;
    rep.comp.gamma = g_bar - mu * mu;
    rep.reconstruction = var_decomposition(rep.comp, n, n_K);

    // Delta-method standard errors within the component half.
    std::vector<double> if_gamma(a_bar.size()), if_recon(a_bar.size());
    for (std::size_t t = 0; t < a_bar.size(); ++t) {
        if_gamma[t] = (a_cross[t] - g_bar) - 2.0 * mu * (a_bar[t] - mu);
        if_recon[t] = ((a_sq[t] - s_bar) + (n_K - 1) * (a_within[t] - w_bar) +
                       (n - n_K) * (a_cross[t] - g_bar)) /
                          n -
                      2.0 * mu * (a_bar[t] - mu);
    }
    rep.se_gamma = sample_sd(if_gamma) / std::sqrt(ta);
    rep.se_reconstruction = sample_sd(if_recon) / std::sqrt(ta);

    const double err_mean = mean_of(b_err);
    double m2 = 0.0;
    for (double e : b_err) m2 += (e - err_mean) * (e - err_mean);
    rep.mc_var_err = m2 / (tb - 1.0);
    m2 /= tb;
    std::vector<double> if_var(b_err.size());
    for (std::size_t t = 0; t < b_err.size(); ++t)
        if_var[t] = (b_err[t] - err_mean) * (b_err[t] - err_mean) - m2;
    rep.se_mc_var = sample_sd(if_var) / std::sqrt(tb);

    rep.mean_naive_var = mean_of(b_naive);
    rep.se_naive = sample_sd(b_naive) / std::sqrt(tb);

    rep.observed_bias = rep.mean_naive_var - rep.mc_var_err;
    rep.predicted_bias = -rep.comp.gamma;
    rep.se_bias_match = std::sqrt(rep.se_naive * rep.se_naive + rep.se_mc_var * rep.se_mc_var +
                                  rep.se_gamma * rep.se_gamma);
    rep.se_reconstruction_match =
        std::sqrt(rep.se_reconstruction * rep.se_reconstruction + rep.se_mc_var * rep.se_mc_var);
    return rep;
}

ComponentsReport estimate_components(const StudyConfig& cfg) {
    cfg.validate();
    if (!cfg.has_seed) throw InvalidInput("estimate_components: a seed is required");

    std::vector<std::vector<double>> errors(cfg.n_mc);
    std::vector<std::vector<int>> fold_of(cfg.n_mc);
    std::vector<double> errs(cfg.n_mc), naives(cfg.n_mc);

    int workers = cfg.workers > 0 ? cfg.workers
                                  : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, cfg.n_mc));
    std::atomic<int> next{0};
    std::atomic<int> failures{0};
    auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= cfg.n_mc) return;
            try {
                const TwoClassDataset data = generate_dataset(cfg, t);
                const std::uint64_t plan_seed =
                    rng::Stream(cfg.seed, trial_stream(t, kPlanErr)).next_u64();
                const FoldPlan plan = plan_cvk(cfg.n1, cfg.n2, cfg.K, cfg.K, plan_seed);
                const CvErrResult er = err_cvk(data, cfg.classifier, plan);
                errors[t] = er.per_obs_error;
                fold_of[t].resize(er.per_obs_error.size());
                const FoldRep& rep = plan.reps.front();
                for (int i = 0; i < cfg.n1; ++i) fold_of[t][i] = rep.class1.assignment[i];
                for (int j = 0; j < cfg.n2; ++j)
                    fold_of[t][cfg.n1 + j] = rep.class2.assignment[j];
                errs[t] = er.err;
                naives[t] = naive_var_err_cvk(er.per_fold_error);
            } catch (const std::exception&) {
                failures.fetch_add(1);
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failures.load() * 100 > cfg.n_mc)
        throw NumericalFailure("estimate_components: more than 1% of trials failed");
    if (failures.load() > 0) {
        // Drop failed slots (empty error vectors).
        std::vector<std::vector<double>> e2;
        std::vector<std::vector<int>> f2;
        std::vector<double> p2, nv2;
        for (int t = 0; t < cfg.n_mc; ++t)
            if (!errors[t].empty()) {
                e2.push_back(std::move(errors[t]));
                f2.push_back(std::move(fold_of[t]));
                p2.push_back(errs[t]);
                nv2.push_back(naives[t]);
            }
        errors = std::move(e2);
        fold_of = std::move(f2);
        errs = std::move(p2);
        naives = std::move(nv2);
    }
    const int n_K = (cfg.n1 + cfg.n2) / cfg.K;
    return components_from_errors(errors, fold_of, errs, naives, n_K);
}

double permutation_ratio(int n) {
    if (n < 2 || n % 2 != 0) throw InvalidInput("permutation_ratio: n must be even and >= 2");
    const double log_c =
        std::lgamma(n + 1.0) - 2.0 * std::lgamma(n / 2 + 1.0);
    return std::exp(log_c - n * std::log(static_cast<double>(n)));
}

std::string report_csv(const StudyReport& report) {
    std::ostringstream head, row;
    head << "classifier,p,K,n1,n2,c,M,R,n_mc,seed,trials_failed,ridge_activations";
    row << to_string(report.cfg.classifier.kind) << ',' << report.cfg.p << ',' << report.cfg.K
        << ',' << report.cfg.n1 << ',' << report.cfg.n2 << ',' << fmt(report.c_used) << ','
        << report.cfg.M << ',' << report.cfg.R << ',' << report.cfg.n_mc << ','
        << report.cfg.seed << ',' << report.trials_failed << ','
        << report.total_ridge_activations;
    for (const auto& p : report.points) {
        head << ",mean_" << p.name << ",true_sd_" << p.name << ",se_mean_" << p.name
             << ",se_true_sd_" << p.name;
        row << ',' << fmt(p.mean) << ',' << fmt(p.true_sd) << ',' << fmt(p.se_mean) << ','
            << fmt(p.se_true_sd);
    }
    for (const auto& s : report.se_estimators) {
        head << ",mean_" << s.name << ",sd_" << s.name << ",bias_" << s.name << ",rms_"
             << s.name << ",se_mean_" << s.name << ",norm_bias_" << s.name << ",norm_sd_"
             << s.name << ",norm_rms_" << s.name;
        row << ',' << fmt(s.mean) << ',' << fmt(s.sd) << ',' << fmt(s.bias) << ','
            << fmt(s.rms) << ',' << fmt(s.se_mean) << ',' << fmt(s.norm_bias) << ','
            << fmt(s.norm_sd) << ',' << fmt(s.norm_rms);
    }
    return head.str() + "\n" + row.str() + "\n";
}

std::string trials_csv(const StudyReport& report) {
    std::ostringstream out;
    out << "trial,failed,auc_cvkm,sd_if,sd_if_term1,sqrt_var_cvkm,auc_cvkr,auc_cvkr_matched,"
           "sqrt_var1_cvk,sqrt_var2_cvk,sqrt_var3_cvk,sqrt_var1_cvkr,sqrt_var2_cvkr,"
           "sqrt_var3_cvkr,err_cvk,naive_var_err,ridge_activations\n";
    for (std::size_t t = 0; t < report.trials.size(); ++t) {
        const TrialResult& r = report.trials[t];
        out << t << ',' << (r.failed ? 1 : 0) << ',' << fmt(r.auc_cvkm) << ',' << fmt(r.sd_if)
            << ',' << fmt(r.sd_if_term1) << ',' << fmt(r.sqrt_var_cvkm) << ','
            << fmt(r.auc_cvkr) << ',' << fmt(r.auc_cvkr_matched) << ',' << fmt(r.sqrt_var1_cvk)
            << ',' << fmt(r.sqrt_var2_cvk) << ',' << fmt(r.sqrt_var3_cvk) << ','
            << fmt(r.sqrt_var1_cvkr) << ',' << fmt(r.sqrt_var2_cvkr) << ','
            << fmt(r.sqrt_var3_cvkr) << ',' << fmt(r.err_cvk) << ',' << fmt(r.naive_var_err)
            << ',' << r.ridge_activations << '\n';
    }
    return out.str();
}

nlohmann::json report_json(const StudyReport& report) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["config"] = study_config_to_json(report.cfg);
    j["c_used"] = report.c_used;
    j["trials_run"] = report.trials_run;
    j["trials_failed"] = report.trials_failed;
    j["ridge_activations"] = report.total_ridge_activations;
    auto pts = nlohmann::json::array();
    for (const auto& p : report.points)
        pts.push_back({{"name", p.name},
                       {"mean", p.mean},
                       {"true_sd", p.true_sd},
                       {"se_mean", p.se_mean},
                       {"se_true_sd", p.se_true_sd}});
    j["point_estimators"] = pts;
    auto ses = nlohmann::json::array();
    for (const auto& s : report.se_estimators)
        ses.push_back({{"name", s.name},
                       {"estimand", s.estimand},
                       {"mean", s.mean},
                       {"sd", s.sd},
                       {"bias", s.bias},
                       {"rms", s.rms},
                       {"se_mean", s.se_mean},
                       {"norm_bias", s.norm_bias},
                       {"norm_sd", s.norm_sd},
                       {"norm_rms", s.norm_rms}});
    j["se_estimators"] = ses;
    return j;
}

} // namespace cvse
