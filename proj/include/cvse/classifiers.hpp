#pragma once

#include <span>
#include <string>

#include "cvse/types.hpp"

namespace cvse {

enum class ClassifierKind { Lda, Qda };

const char* to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(const std::string& name);

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::Lda;
    double ridge = 0.0; // user regularizer added to every covariance estimate
};

/// Immutable fitted scoring rule. Scores are oriented so that the training
/// mean score of class 1 is at least that of class 2; classification for the
/// error rate is class 1 iff score > 0.
class TrainedClassifier {
public:
    double score(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
    void score_rows(const Matrix& rows, std::span<double> out) const;

    ClassifierKind kind() const { return kind_; }
    int dim() const { return p_; }
    // Number of automatic ridge bumps applied during this fit (diagnostic).
    int ridge_activations() const { return ridge_activations_; }
    const Eigen::VectorXd& linear_weights() const { return w_; }

private:
    friend TrainedClassifier train(const ClassifierSpec&, const Matrix&, const Matrix&);

    ClassifierKind kind_ = ClassifierKind::Lda;
    int p_ = 0;
    double sign_ = 1.0;
    int ridge_activations_ = 0;
    // LDA
    Eigen::VectorXd w_;
    double b_ = 0.0;
    // QDA
    Eigen::VectorXd mean1_, mean2_;
    Eigen::MatrixXd inv_cov1_, inv_cov2_;
    double log_det1_ = 0.0, log_det2_ = 0.0;
};

/// Fit an LDA (pooled covariance) or QDA (per-class covariance) scoring rule.
/// Near-singular covariances get an automatic ridge of 1e-6 * trace/p on top
/// of the spec's ridge; if the inverse still fails the consistency check
/// ||Sigma Sigma^-1 - I||_inf < 1e-8, a NumericalFailure is thrown.
TrainedClassifier train(const ClassifierSpec& spec, const Matrix& train1, const Matrix& train2);

} // namespace cvse
