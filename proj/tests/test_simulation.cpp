#include <doctest.h>

#include <cmath>

#include "cvse/classifiers.hpp"
#include "cvse/core.hpp"
#include "cvse/rng.hpp"
#include "cvse/simulation.hpp"

using namespace cvse;

namespace {

StudyConfig base_config() {
    StudyConfig cfg;
    cfg.n1 = cfg.n2 = 10;
    cfg.p = 2;
    cfg.K = 5;
    cfg.M = 300;
    cfg.R = 30;
    cfg.n_mc = 24;
    cfg.seed = 31337;
    cfg.has_seed = true;
    cfg.run_cvkm = true;
    cfg.run_cvkr = true;
    cfg.run_err = true;
    return cfg;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

} // namespace

TEST_CASE("generate_dataset is deterministic and matches its moments") {
    StudyConfig cfg = base_config();
    cfg.n1 = cfg.n2 = 4000;
    cfg.p = 3;
    cfg.c = 0.7;
    const TwoClassDataset a = generate_dataset(cfg, 5);
    const TwoClassDataset b = generate_dataset(cfg, 5);
    CHECK(a.class1() == b.class1());
    CHECK(a.class2() == b.class2());
    const TwoClassDataset other = generate_dataset(cfg, 6);
    CHECK(a.class1() != other.class1());

    const double band = 3.0 / std::sqrt(4000.0);
    for (int d = 0; d < 3; ++d) {
        CHECK(std::abs(a.class1().col(d).mean()) < band);
        CHECK(std::abs(a.class2().col(d).mean() - 0.7) < band);
    }
}

TEST_CASE("default c targets a Bayes AUC near 0.80") {
    StudyConfig cfg = base_config();
    cfg.p = 4;
    cfg.c = -1.0;
    CHECK(cfg.c_effective() == doctest::Approx(1.19 / 2.0).epsilon(1e-12));

    // Large-sample LDA approaches the Bayes rule; its test AUC approaches
    // Phi(c sqrt(p) / sqrt(2)).
    cfg.n1 = cfg.n2 = 1500;
    const TwoClassDataset train_set = generate_dataset(cfg, 0);
    const TwoClassDataset test_set = generate_dataset(cfg, 1);
    const TrainedClassifier c =
        train({ClassifierKind::Lda, 0.0}, train_set.class1(), train_set.class2());
    std::vector<double> s1(test_set.n1()), s2(test_set.n2());
    c.score_rows(test_set.class1(), s1);
    c.score_rows(test_set.class2(), s2);
    const double bayes = normal_cdf(cfg.c_effective() * std::sqrt(4.0) / std::sqrt(2.0));
    CHECK(bayes == doctest::Approx(0.80).epsilon(0.01));
    CHECK(empirical_auc(s1, s2) == doctest::Approx(bayes).epsilon(0.03));
}

TEST_CASE("c = 0 gives chance-level AUC on average") {
    StudyConfig cfg = base_config();
    cfg.c = 0.0;
    cfg.n1 = cfg.n2 = 40;
    double mean = 0.0;
    const int trials = 10;
    for (int t = 0; t < trials; ++t) {
        const TwoClassDataset data = generate_dataset(cfg, t);
        const TwoClassDataset probe = generate_dataset(cfg, 1000 + t);
        const TrainedClassifier c =
            train({ClassifierKind::Lda, 0.0}, data.class1(), data.class2());
        std::vector<double> s1(probe.n1()), s2(probe.n2());
        c.score_rows(probe.class1(), s1);
        c.score_rows(probe.class2(), s2);
        mean += empirical_auc(s1, s2);
    }
    CHECK(mean / trials == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("run_study is reproducible and its report identities hold") {
    const StudyConfig cfg = base_config();
    StudyConfig two_workers = cfg;
    two_workers.workers = 2;
    const StudyReport a = run_study(cfg);
    const StudyReport b = run_study(two_workers);

    CHECK(report_csv(a) == report_csv(b));
    CHECK(trials_csv(a) == trials_csv(b));
    CHECK(a.trials_failed == 0);

    bool saw_cvkm_truth = false;
    for (const auto& p : a.points) {
        CHECK(std::isfinite(p.mean));
        CHECK(p.true_sd > 0.0);
        if (p.name == "auc_cvkm") saw_cvkm_truth = true;
    }
    CHECK(saw_cvkm_truth);

    CHECK(!a.se_estimators.empty());
    for (const auto& s : a.se_estimators) {
        CHECK(std::abs(s.rms * s.rms - (s.bias * s.bias + s.sd * s.sd)) < 1e-12);
        double true_sd = 0.0;
        for (const auto& p : a.points)
            if (p.name == s.estimand) true_sd = p.true_sd;
        CHECK(s.norm_bias == s.bias / true_sd);
        CHECK(s.norm_sd == s.sd / true_sd);
        CHECK(s.norm_rms == s.rms / true_sd);
    }
}

TEST_CASE("run_study validates its configuration") {
    StudyConfig cfg = base_config();
    cfg.has_seed = false;
    CHECK_THROWS_AS(run_study(cfg), InvalidInput);
    cfg = base_config();
    cfg.K = 3; // does not divide 10
    CHECK_THROWS_AS(run_study(cfg), InvalidInput);
    cfg = base_config();
    cfg.run_cvkm = cfg.run_cvkr = cfg.run_err = false;
    CHECK_THROWS_AS(run_study(cfg), InvalidInput);
}

TEST_CASE("study config JSON round trip") {
    StudyConfig cfg = base_config();
    cfg.classifier.kind = ClassifierKind::Qda;
    cfg.pairing = Pairing::Matched;
    cfg.policy = DenPolicy::Skip;
    const nlohmann::json j = study_config_to_json(cfg);
    const StudyConfig back = study_config_from_json(j);
    CHECK(back.n1 == cfg.n1);
    CHECK(back.K == cfg.K);
    CHECK(back.classifier.kind == ClassifierKind::Qda);
    CHECK(back.pairing == Pairing::Matched);
    CHECK(back.policy == DenPolicy::Skip);
    CHECK(back.has_seed);
    CHECK(back.seed == cfg.seed);
    CHECK(back.run_cvkm == cfg.run_cvkm);
    CHECK(back.run_err == cfg.run_err);

    CHECK_THROWS_AS(study_config_from_json(nlohmann::json{{"estimators", {"bogus"}}}),
                    InvalidInput);
}

TEST_CASE("components of independent errors: omega and gamma vanish") {
    // A fixed rule ignoring its training folds produces i.i.d. e_i; built
    // synthetically so the moment engine is exercised in isolation.
    rng::Stream s(71, 0);
    const int T = 4000, n = 12, n_K = 3;
    std::vector<std::vector<double>> errors(T);
    std::vector<std::vector<int>> fold_of(T);
    std::vector<double> errs(T), naives(T);
    for (int t = 0; t < T; ++t) {
        errors[t].resize(n);
        fold_of[t].resize(n);
        std::vector<double> fold_err(n / n_K, 0.0);
        for (int i = 0; i < n; ++i) {
            errors[t][i] = s.uniform() < 0.3 ? 1.0 : 0.0;
            fold_of[t][i] = i / n_K;
            fold_err[i / n_K] += errors[t][i] / n_K;
        }
        double mean = 0.0;
        for (double e : errors[t]) mean += e;
        errs[t] = mean / n;
        double fm = 0.0;
        for (double f : fold_err) fm += f;
        fm /= fold_err.size();
        double ss = 0.0;
        for (double f : fold_err) ss += (f - fm) * (f - fm);
        naives[t] = ss / (fold_err.size() - 1) / fold_err.size();
    }
    const ComponentsReport rep = components_from_errors(errors, fold_of, errs, naives, n_K);
    CHECK(rep.comp.sigma2 == doctest::Approx(0.21).epsilon(0.05));
    CHECK(std::abs(rep.comp.omega) < 0.01);
    CHECK(std::abs(rep.comp.gamma) < 0.01);
    CHECK(rep.comp.mu == doctest::Approx(0.3).epsilon(0.05));
    // For independent errors the decomposition collapses to sigma2 / n.
    CHECK(std::abs(rep.reconstruction - rep.mc_var_err) <
          2.5 * rep.se_reconstruction_match);
    CHECK(std::abs(rep.observed_bias - rep.predicted_bias) < 2.5 * rep.se_bias_match);
}

TEST_CASE("estimate_components on the LDA study: gamma is positive") {
    StudyConfig cfg = base_config();
    cfg.n1 = cfg.n2 = 20;
    cfg.K = 5;
    cfg.n_mc = 600;
    cfg.seed = 920;
    const ComponentsReport rep = estimate_components(cfg);
    CHECK(rep.n == 40);
    CHECK(rep.n_K == 8);
    CHECK(rep.comp.sigma2 > 0.0);
    CHECK(rep.comp.gamma > 0.0); // the anticipated positive cross-fold covariance
    CHECK(std::abs(rep.observed_bias - rep.predicted_bias) < 3.0 * rep.se_bias_match);
}

TEST_CASE("permutation_ratio") {
    CHECK(permutation_ratio(2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(permutation_ratio(4) == doctest::Approx(6.0 / 256.0).epsilon(1e-12));
    double prev = permutation_ratio(2);
    for (int n = 4; n <= 40; n += 2) {
        const double r = permutation_ratio(n);
        CHECK(r < prev);
        prev = r;
    }
    CHECK_THROWS_AS(permutation_ratio(3), InvalidInput);
    CHECK_THROWS_AS(permutation_ratio(0), InvalidInput);
}
