#include <doctest.h>

#include <cmath>
#include <vector>

#include "cvse/adhoc_variance.hpp"
#include "cvse/rng.hpp"

using namespace cvse;

TEST_CASE("naive_var_err_cvk") {
    const std::vector<double> e{0.1, 0.2, 0.3};
    CHECK(naive_var_err_cvk(e) == doctest::Approx(0.01 / 3.0).epsilon(1e-14));
    CHECK(naive_var_err_cvk(std::vector<double>{0.4, 0.4, 0.4, 0.4}) == 0.0);
    CHECK_THROWS_AS(naive_var_err_cvk(std::vector<double>{0.1}), InvalidInput);

    // textbook two-pass formula on random input
    rng::Stream s(41, 0);
    std::vector<double> v(9);
    for (auto& x : v) x = s.uniform();
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double expect = ss / (v.size() - 1) / v.size();
    CHECK(naive_var_err_cvk(v) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("var_decomposition") {
    CHECK(var_decomposition({1.0, 0.5, 0.1, 0.0}, 10, 2) ==
          doctest::Approx(0.23).epsilon(1e-14));
    CHECK(var_decomposition({2.0, 0.0, 0.0, 0.0}, 10, 2) ==
          doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("expected naive value and bias of the naive estimator") {
    const CovarianceComponents comp{0.8, 0.3, 0.05, 0.2};
    CHECK(expected_naive_bias(comp) == -0.05);
    const int n = 20, n_K = 4; // K = 5
    CHECK(expected_naive_value(comp, n, n_K) ==
          doctest::Approx(0.8 / 20 + 3 * 0.3 / 20 - 0.05 / 5).epsilon(1e-14));
    // consistency: expected naive = true variance + bias
    CHECK(expected_naive_value(comp, n, n_K) ==
          doctest::Approx(var_decomposition(comp, n, n_K) - 0.05).epsilon(1e-14));
}

TEST_CASE("var2_cvk") {
    const std::vector<double> a{0.7, 0.8, 0.9};
    CHECK(var2_cvk(a) == doctest::Approx(0.01 / 3.0).epsilon(1e-14));
    CHECK(var2_cvk(std::vector<double>{0.6, 0.6}) == 0.0);
}

TEST_CASE("var1_cvk pools all fold pairs") {
    Matrix pairs(2, 2);
    pairs << 0.7, 0.8, 0.9, 1.0;
    // sample variance of {.7,.8,.9,1.0} = 0.0166..., prefactor 1/sqrt(4)
    double mean = 0.85, ss = 0.0;
    for (double v : {0.7, 0.8, 0.9, 1.0}) ss += (v - mean) * (v - mean);
    CHECK(var1_cvk(pairs) == doctest::Approx(ss / 3.0 / 2.0).epsilon(1e-13));
    CHECK(var1_cvk(Matrix::Constant(3, 3, 0.5)) == 0.0);
}

TEST_CASE("var3_cvk row/column decomposition") {
    Matrix pairs(2, 2);
    pairs << 0.7, 0.8, 0.9, 1.0;
    const double auc = 0.85;
    // row means .75, .95; col means .8, .9
    const double rows = (0.75 - auc) * (0.75 - auc) + (0.95 - auc) * (0.95 - auc);
    const double cols = (0.8 - auc) * (0.8 - auc) + (0.9 - auc) * (0.9 - auc);
    CHECK(var3_cvk(pairs, auc, Var3Criterion::Unbiased) ==
          doctest::Approx(rows / 2.0 + cols / 2.0).epsilon(1e-13));
    CHECK(var3_cvk(pairs, auc, Var3Criterion::Mle) ==
          doctest::Approx(rows / 4.0 + cols / 4.0).epsilon(1e-13));
}

TEST_CASE("CVKR averages reduce to the single-repetition estimators at R=1") {
    rng::Stream s(43, 0);
    Matrix pairs(3, 3);
    for (int i = 0; i < 9; ++i) pairs(i / 3, i % 3) = s.uniform();
    std::vector<double> matched{pairs(0, 0), pairs(1, 1), pairs(2, 2)};
    const double auc = pairs.mean();

    CHECK(var1_cvkr({pairs}) == var1_cvk(pairs));
    CHECK(var2_cvkr({matched}) == var2_cvk(matched));
    CHECK(var3_cvkr({pairs}, std::vector<double>{auc}) == var3_cvk(pairs, auc));

    // averaging over two repetitions
    Matrix pairs2 = pairs.array() + 0.01;
    CHECK(var1_cvkr({pairs, pairs2}) ==
          doctest::Approx((var1_cvk(pairs) + var1_cvk(pairs2)) / 2).epsilon(1e-15));
}

TEST_CASE("var_cvkm") {
    std::vector<double> constant(10, 0.75); // exactly representable
    CHECK(var_cvkm(constant, 4, 4) == 0.0);

    rng::Stream s(44, 0);
    std::vector<double> v(50);
    for (auto& x : v) x = s.uniform();
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sample_var = ss / (v.size() - 1);
    CHECK(var_cvkm(v, 4, 4) == doctest::Approx(sample_var / 4.0).epsilon(1e-13));
}

TEST_CASE("var1 and var2 agree up to the known pooling factor on replicated columns") {
    // With every column equal to the matched sequence, the pooled estimate
    // carries the factor K/(K+1) relative to the matched one. Both vanish on
    // constant input.
    const std::vector<double> a{0.62, 0.7, 0.81, 0.9};
    const int K = 4;
    Matrix pairs(K, K);
    for (int k1 = 0; k1 < K; ++k1)
        for (int k2 = 0; k2 < K; ++k2) pairs(k1, k2) = a[k1];
    std::vector<double> diag{pairs(0, 0), pairs(1, 1), pairs(2, 2), pairs(3, 3)};
    CHECK(var1_cvk(pairs) ==
          doctest::Approx(var2_cvk(diag) * K / (K + 1.0)).epsilon(1e-13));
}

TEST_CASE("variance outputs are non-negative on random inputs") {
    rng::Stream s(45, 0);
    for (int t = 0; t < 25; ++t) {
        Matrix pairs(3, 4);
        for (int i = 0; i < 12; ++i) pairs(i / 4, i % 4) = s.uniform();
        std::vector<double> matched{pairs(0, 0), pairs(1, 1), pairs(2, 2)};
        CHECK(var1_cvk(pairs) >= 0.0);
        CHECK(var2_cvk(matched) >= 0.0);
        CHECK(var3_cvk(pairs, pairs.mean()) >= 0.0);
        CHECK(var_cvkm(matched, 3, 4) >= 0.0);
    }
}
