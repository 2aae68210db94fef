#include <doctest.h>

#include <cmath>
#include <vector>

#include "cvse/classifiers.hpp"
#include "cvse/core.hpp"
#include "cvse/rng.hpp"

using namespace cvse;

namespace {

Matrix gaussian_cloud(rng::Stream& s, int n, int p, double shift, double scale = 1.0) {
    Matrix x(n, p);
    for (int i = 0; i < n; ++i)
        for (int d = 0; d < p; ++d) x(i, d) = shift + scale * s.gaussian();
    return x;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::vector<double> scores_of(const TrainedClassifier& c, const Matrix& x) {
    std::vector<double> s(x.rows());
    c.score_rows(x, s);
    return s;
}

} // namespace

TEST_CASE("orientation: class-1 training mean score exceeds class-2") {
    rng::Stream s(5, 0);
    const Matrix x1 = gaussian_cloud(s, 20, 2, 3.0);
    const Matrix x2 = gaussian_cloud(s, 20, 2, -3.0);
    for (ClassifierKind kind : {ClassifierKind::Lda, ClassifierKind::Qda}) {
        const TrainedClassifier c = train({kind, 0.0}, x1, x2);
        const auto s1 = scores_of(c, x1);
        const auto s2 = scores_of(c, x2);
        double m1 = 0, m2 = 0;
        for (double v : s1) m1 += v;
        for (double v : s2) m2 += v;
        CHECK(m1 / s1.size() > m2 / s2.size());
    }

    // Swapping the classes must flip the orientation, not the contract.
    const TrainedClassifier swapped = train({ClassifierKind::Lda, 0.0}, x2, x1);
    const auto s1 = scores_of(swapped, x2);
    const auto s2 = scores_of(swapped, x1);
    double m1 = 0, m2 = 0;
    for (double v : s1) m1 += v;
    for (double v : s2) m2 += v;
    CHECK(m1 / s1.size() > m2 / s2.size());
}

TEST_CASE("identical training clouds degenerate to constant LDA score") {
    rng::Stream s(6, 0);
    const Matrix x = gaussian_cloud(s, 15, 3, 0.0);
    const TrainedClassifier c = train({ClassifierKind::Lda, 0.0}, x, x);
    CHECK(c.linear_weights().norm() == 0.0);
    const Matrix probe = gaussian_cloud(s, 9, 3, 1.0);
    const auto sc = scores_of(c, probe);
    for (double v : sc) CHECK(v == sc.front());
    // Constant scores mean every pair ties: AUC is exactly one half.
    CHECK(empirical_auc(sc, scores_of(c, gaussian_cloud(s, 7, 3, -1.0))) == 0.5);
}

TEST_CASE("1-D Gaussians: test AUC near the closed form") {
    rng::Stream s(7, 0);
    const Matrix train1 = gaussian_cloud(s, 200, 1, 2.0);
    const Matrix train2 = gaussian_cloud(s, 200, 1, 0.0);
    const TrainedClassifier c = train({ClassifierKind::Lda, 0.0}, train1, train2);
    const Matrix test1 = gaussian_cloud(s, 2000, 1, 2.0);
    const Matrix test2 = gaussian_cloud(s, 2000, 1, 0.0);
    const double auc = empirical_auc(scores_of(c, test1), scores_of(c, test2));
    const double bayes = normal_cdf(2.0 / std::sqrt(2.0)); // ~0.921
    CHECK(auc == doctest::Approx(bayes).epsilon(0.06));
}

TEST_CASE("training is deterministic") {
    rng::Stream s(8, 0);
    const Matrix x1 = gaussian_cloud(s, 12, 3, 1.0);
    const Matrix x2 = gaussian_cloud(s, 10, 3, 0.0);
    const Matrix probe = gaussian_cloud(s, 20, 3, 0.5);
    for (ClassifierKind kind : {ClassifierKind::Lda, ClassifierKind::Qda}) {
        const auto a = scores_of(train({kind, 0.0}, x1, x2), probe);
        const auto b = scores_of(train({kind, 0.0}, x1, x2), probe);
        CHECK(a == b);
    }
}

TEST_CASE("LDA translation equivariance of score differences") {
    rng::Stream s(9, 0);
    const Matrix x1 = gaussian_cloud(s, 14, 2, 1.0);
    const Matrix x2 = gaussian_cloud(s, 14, 2, 0.0);
    const Matrix probe = gaussian_cloud(s, 10, 2, 0.3);
    Eigen::RowVectorXd shift(2);
    shift << 42.0, -17.0;

    const auto base = scores_of(train({ClassifierKind::Lda, 0.0}, x1, x2), probe);
    const Matrix x1s = x1.rowwise() + shift;
    const Matrix x2s = x2.rowwise() + shift;
    const Matrix ps = probe.rowwise() + shift;
    const auto shifted = scores_of(train({ClassifierKind::Lda, 0.0}, x1s, x2s), ps);
    for (std::size_t i = 1; i < base.size(); ++i)
        CHECK(base[i] - base[0] == doctest::Approx(shifted[i] - shifted[0]).epsilon(1e-7));
}

TEST_CASE("QDA matches LDA ordering on spherical equal-covariance data") {
    rng::Stream s(10, 0);
    const Matrix x1 = gaussian_cloud(s, 400, 2, 1.0);
    const Matrix x2 = gaussian_cloud(s, 400, 2, 0.0);
    const Matrix t1 = gaussian_cloud(s, 800, 2, 1.0);
    const Matrix t2 = gaussian_cloud(s, 800, 2, 0.0);
    const TrainedClassifier lda = train({ClassifierKind::Lda, 0.0}, x1, x2);
    const TrainedClassifier qda = train({ClassifierKind::Qda, 0.0}, x1, x2);
    const double auc_lda = empirical_auc(scores_of(lda, t1), scores_of(lda, t2));
    const double auc_qda = empirical_auc(scores_of(qda, t1), scores_of(qda, t2));
    CHECK(auc_lda == doctest::Approx(auc_qda).epsilon(0.03));
}

TEST_CASE("score rejects dimension mismatch") {
    rng::Stream s(11, 0);
    const TrainedClassifier c =
        train({ClassifierKind::Lda, 0.0}, gaussian_cloud(s, 5, 2, 1.0),
              gaussian_cloud(s, 5, 2, 0.0));
    Eigen::RowVectorXd wrong(3);
    wrong.setZero();
    CHECK_THROWS_AS(c.score(wrong), InvalidInput);
}

TEST_CASE("automatic ridge rescues a constant feature column") {
    rng::Stream s(12, 0);
    Matrix x1 = gaussian_cloud(s, 8, 3, 1.0);
    Matrix x2 = gaussian_cloud(s, 8, 3, 0.0);
    x1.col(2).setConstant(5.0); // zero variance in both classes
    x2.col(2).setConstant(5.0);
    const TrainedClassifier c = train({ClassifierKind::Lda, 0.0}, x1, x2);
    CHECK(c.ridge_activations() > 0);
    const auto sc = scores_of(c, x1);
    for (double v : sc) CHECK(std::isfinite(v));
}

TEST_CASE("fully degenerate training data fails loudly") {
    Matrix x1 = Matrix::Zero(4, 2);
    Matrix x2 = Matrix::Zero(4, 2);
    CHECK_THROWS_AS(train({ClassifierKind::Lda, 0.0}, x1, x2), NumericalFailure);
}

TEST_CASE("training precondition checks") {
    rng::Stream s(13, 0);
    const Matrix ok = gaussian_cloud(s, 5, 2, 0.0);
    const Matrix one = gaussian_cloud(s, 1, 2, 0.0);
    const Matrix wrong_p = gaussian_cloud(s, 5, 3, 0.0);
    CHECK_THROWS_AS(train({ClassifierKind::Lda, 0.0}, one, ok), InvalidInput);
    CHECK_THROWS_AS(train({ClassifierKind::Lda, 0.0}, ok, wrong_p), InvalidInput);
    CHECK_THROWS_AS(train({ClassifierKind::Lda, -1.0}, ok, ok), InvalidInput);
}
