#pragma once

#include <vector>

#include "cvse/classifiers.hpp"
#include "cvse/types.hpp"

namespace cvse {

/// What to do with CVKM pairs that never share a testing fold. Strict raises
/// a CoverageError naming the worst pair and a minimal-M suggestion; Skip
/// averages over covered pairs and renormalizes, counting the omissions.
enum class DenPolicy { Strict, Skip };

struct CvAucResult {
    double auc = 0.0;
    CvMode mode = CvMode::CVK;
    Pairing pairing = Pairing::Full;
    int K1 = 0, K2 = 0;

    // CVKM: indicator-weighted sums; CVN/CVK full: per-pair psi with den = 1;
    // CVKR full: psi summed over repetitions with den = M.
    PairwiseAucTable table;

    // CVKM (and matched single-classifier modes): per-repetition scores and
    // testing indicators, as consumed by the influence-function estimator.
    RepetitionScores reps;

    Matrix per_fold_auc;                    // AUC_{k1 k2}, CVN/CVK full pairing
    std::vector<double> matched_auc;        // AUC_k (matched pairing or diagonal)
    std::vector<Matrix> per_rep_fold_auc;   // CVKR full: one K1 x K2 block per rep
    std::vector<std::vector<double>> per_rep_matched_auc; // CVKR: AUC_k per rep
    std::vector<double> per_rep_auc;        // CVKR: full-pairing estimate per rep
    std::vector<double> auc_11m;            // CVKM: testing-fold AUC per repetition

    std::vector<double> per_obs_auc1;       // AUC_{1i}
    std::vector<double> per_obs_auc2;       // class-2 analog

    int ridge_activations = 0;
    long skipped_pairs = 0;                 // CVKM Skip policy only
};

struct CvErrResult {
    double err = 0.0;
    std::vector<double> per_obs_error; // pooled: class-1 block then class-2 block
    std::vector<double> per_fold_error;
    int ridge_activations = 0;
};

/// Leave-one-out AUC: for each pair (i, j) the classifier is trained with
/// x_i and y_j both removed.
CvAucResult auc_cvn(const TwoClassDataset& data, const ClassifierSpec& spec);

/// Single K-fold AUC. Full pairing trains one classifier per excluded fold
/// pair (K1*K2 fits) and scores every pair with the classifier excluding both
/// of its folds; matched pairing trains K fits (fold k excluded from both
/// classes) and pairs testing folds of equal index only.
CvAucResult auc_cvk(const TwoClassDataset& data, const ClassifierSpec& spec,
                    const FoldPlan& plan, Pairing pairing = Pairing::Full);

/// Repeated K-fold AUC: the per-repetition K-fold kernels averaged over reps.
CvAucResult auc_cvkr(const TwoClassDataset& data, const ClassifierSpec& spec,
                     const FoldPlan& plan, Pairing pairing = Pairing::Full);

/// Monte-Carlo K-fold AUC: per-pair ratio of indicator-weighted psi sums to
/// co-occurrence counts, averaged over pairs.
CvAucResult auc_cvkm(const TwoClassDataset& data, const ClassifierSpec& spec,
                     const FoldPlan& plan, DenPolicy policy = DenPolicy::Strict);

/// K-fold error rate on the pooled observations with matched per-class folds:
/// pooled testing fold k is class-1 fold k together with class-2 fold k.
CvErrResult err_cvk(const TwoClassDataset& data, const ClassifierSpec& spec,
                    const FoldPlan& plan);

} // namespace cvse
