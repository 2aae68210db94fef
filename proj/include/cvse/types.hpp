#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cvse/errors.hpp"

namespace cvse {

// Row-major so that a row of scores is a contiguous span for the kernels.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Feature matrices of the two classes; rows are observations.
class TwoClassDataset {
public:
    TwoClassDataset(Matrix class1, Matrix class2);

    const Matrix& class1() const { return class1_; }
    const Matrix& class2() const { return class2_; }
    int n1() const { return static_cast<int>(class1_.rows()); }
    int n2() const { return static_cast<int>(class2_.rows()); }
    int p() const { return static_cast<int>(class1_.cols()); }

private:
    Matrix class1_;
    Matrix class2_;
};

/// Partition map for one class. Folds are 0-based internally; the file
/// formats and docs use the same 0-based convention.
struct FoldMap {
    std::vector<int> assignment; // observation -> fold id in [0, K)
    int K = 0;
    int base_fold_size = 0; // n_K; in ragged mode the first n%K folds hold one extra

    int n() const { return static_cast<int>(assignment.size()); }
    std::vector<int> fold_sizes() const;
    std::vector<int> members(int k) const;

    // Throws InvalidInput if the assignment is not a balanced partition.
    void validate() const;
};

enum class CvMode { CVN, CVK, CVKR, CVKM };
enum class Pairing { Full, Matched };

const char* to_string(CvMode mode);
const char* to_string(Pairing pairing);

struct FoldRep {
    FoldMap class1;
    FoldMap class2;
};

/// A realized cross-validation partitioning: one FoldRep per repetition.
/// CVN/CVK hold a single repetition; CVKR holds R, CVKM holds M. For CVKM
/// the testing fold is fold 0 of each class in every repetition.
struct FoldPlan {
    CvMode mode = CvMode::CVK;
    std::vector<FoldRep> reps;
    std::uint64_t seed = 0;

    int n_reps() const { return static_cast<int>(reps.size()); }
    int K1() const { return reps.empty() ? 0 : reps.front().class1.K; }
    int K2() const { return reps.empty() ? 0 : reps.front().class2.K; }
    int n1() const { return reps.empty() ? 0 : reps.front().class1.n(); }
    int n2() const { return reps.empty() ? 0 : reps.front().class2.n(); }

    void validate() const;
};

/// Per-repetition classifier scores and testing-fold indicators.
/// Entries of scores* are NaN whenever the matching indicator is 0 and the
/// mode does not score that observation (CVKM scores testing folds only).
struct RepetitionScores {
    Matrix scores1; // M x n1
    Matrix scores2; // M x n2
    std::vector<std::uint8_t> ind1; // M x n1, row-major
    std::vector<std::uint8_t> ind2; // M x n2, row-major
    int M = 0;
    int n1 = 0;
    int n2 = 0;

    bool in_test1(int m, int i) const { return ind1[static_cast<std::size_t>(m) * n1 + i] != 0; }
    bool in_test2(int m, int j) const { return ind2[static_cast<std::size_t>(m) * n2 + j] != 0; }
};

/// Per-pair aggregates of the CVKM estimator: num = sum over repetitions of
/// I*I*psi, den = sum of I*I (co-occurrence counts).
struct PairwiseAucTable {
    Matrix num; // n1 x n2
    Matrix den; // n1 x n2
};

} // namespace cvse
