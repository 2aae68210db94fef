#include "cvse/classifiers.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace cvse {

const char* to_string(ClassifierKind kind) {
    return kind == ClassifierKind::Lda ? "lda" : "qda";
}

ClassifierKind classifier_kind_from_string(const std::string& name) {
    if (name == "lda" || name == "LDA") return ClassifierKind::Lda;
    if (name == "qda" || name == "QDA") return ClassifierKind::Qda;
    throw InvalidInput("unknown classifier kind: " + name);
}

namespace {

Eigen::MatrixXd sample_covariance(const Matrix& x, const Eigen::RowVectorXd& mean) {
    const Eigen::MatrixXd centered = x.rowwise() - mean;
    return (centered.transpose() * centered) / static_cast<double>(x.rows() - 1);
}

// Regularize in place, returning the number of automatic ridge bumps, then
// invert and verify the inverse. Throws NumericalFailure when the matrix is
// singular beyond what the ridge policy repairs.
int invert_covariance(Eigen::MatrixXd& sigma, Eigen::MatrixXd& inverse) {
    const int p = static_cast<int>(sigma.rows());
    int bumps = 0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo < 1e-10 * hi) {
        const double lambda = 1e-6 * sigma.trace() / p;
        sigma += lambda * Eigen::MatrixXd::Identity(p, p);
        ++bumps;
    }

    inverse = sigma.inverse();
    const double residual = (sigma * inverse - Eigen::MatrixXd::Identity(p, p))
                                .cwiseAbs()
                                .maxCoeff();
    if (!inverse.allFinite() || residual >= 1e-8)
        throw NumericalFailure("singular covariance after ridge regularization");
    return bumps;
}

double log_determinant(const Eigen::MatrixXd& sigma) {
    const double det = sigma.determinant();
    if (!(det > 0.0)) throw NumericalFailure("non-positive covariance determinant");
    return std::log(det);
}

} // namespace

TrainedClassifier train(const ClassifierSpec& spec, const Matrix& train1, const Matrix& train2) {
    if (train1.rows() < 2 || train2.rows() < 2)
        throw InvalidInput("train: each class needs at least 2 training rows");
    if (train1.cols() != train2.cols() || train1.cols() < 1)
        throw InvalidInput("train: inconsistent feature dimension");
    if (spec.ridge < 0.0) throw InvalidInput("train: ridge must be non-negative");

    const int p = static_cast<int>(train1.cols());
    const double n1 = static_cast<double>(train1.rows());
    const double n2 = static_cast<double>(train2.rows());
    const Eigen::RowVectorXd mean1 = train1.colwise().mean();
    const Eigen::RowVectorXd mean2 = train2.colwise().mean();

    TrainedClassifier c;
    c.kind_ = spec.kind;
    c.p_ = p;
    c.mean1_ = mean1.transpose();
    c.mean2_ = mean2.transpose();

    const Eigen::MatrixXd user_ridge = spec.ridge * Eigen::MatrixXd::Identity(p, p);

    if (spec.kind == ClassifierKind::Lda) {
        Eigen::MatrixXd pooled =
            ((n1 - 1.0) * sample_covariance(train1, mean1) +
             (n2 - 1.0) * sample_covariance(train2, mean2)) /
                (n1 + n2 - 2.0) +
            user_ridge;
        Eigen::MatrixXd inv;
        c.ridge_activations_ = invert_covariance(pooled, inv);
        c.w_ = inv * (c.mean1_ - c.mean2_);
        c.b_ = -0.5 * c.w_.dot(c.mean1_ + c.mean2_);
    } else {
        Eigen::MatrixXd sigma1 = sample_covariance(train1, mean1) + user_ridge;
        Eigen::MatrixXd sigma2 = sample_covariance(train2, mean2) + user_ridge;
        c.ridge_activations_ = invert_covariance(sigma1, c.inv_cov1_);
        c.ridge_activations_ += invert_covariance(sigma2, c.inv_cov2_);
        c.log_det1_ = log_determinant(sigma1);
        c.log_det2_ = log_determinant(sigma2);
    }

    // Orient so class-1 training data scores higher on average.
    double sum1 = 0.0, sum2 = 0.0;
    for (int i = 0; i < train1.rows(); ++i) sum1 += c.score(train1.row(i));
    for (int i = 0; i < train2.rows(); ++i) sum2 += c.score(train2.row(i));
    if (sum1 / n1 < sum2 / n2) c.sign_ = -1.0;
    return c;
}

double TrainedClassifier::score(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    if (x.size() != p_) throw InvalidInput("score: feature dimension mismatch");
    double raw;
    if (kind_ == ClassifierKind::Lda) {
        raw = w_.dot(x.transpose()) + b_;
    } else {
        const Eigen::VectorXd d1 = x.transpose() - mean1_;
        const Eigen::VectorXd d2 = x.transpose() - mean2_;
        raw = 0.5 * (d2.dot(inv_cov2_ * d2) - d1.dot(inv_cov1_ * d1) + log_det2_ - log_det1_);
    }
    return sign_ * raw;
}

void TrainedClassifier::score_rows(const Matrix& rows, std::span<double> out) const {
    if (static_cast<std::size_t>(rows.rows()) != out.size())
        throw InvalidInput("score_rows: output size mismatch");
    for (int i = 0; i < rows.rows(); ++i) out[i] = score(rows.row(i));
}

} // namespace cvse
