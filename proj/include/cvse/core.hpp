#pragma once

#include <span>

#include "cvse/types.hpp"

namespace cvse {

/// Mann-Whitney comparison kernel: 1 if a > b, 1/2 on a tie, 0 otherwise.
/// Ties use exact floating equality by default; tie_tol > 0 widens the tie
/// band to |a - b| <= tie_tol. Throws InvalidInput on non-finite scores.
double psi(double a, double b, double tie_tol = 0.0);

/// Empirical AUC of two score samples: mean of psi over all pairs.
double empirical_auc(std::span<const double> scores1, std::span<const double> scores2,
                     double tie_tol = 0.0);

/// The canonical fold map: observation i (1-based) belongs to fold k iff
/// n_K (k-1) < i <= n_K k. Requires K to divide n unless ragged is set, in
/// which case the first n % K folds take one extra observation each.
/// Valid K range is [2, n].
FoldMap fold_map_canonical(int n, int K, bool ragged = false);

} // namespace cvse
