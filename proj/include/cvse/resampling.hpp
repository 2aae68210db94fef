#pragma once

#include <cstdint>

#include <json.hpp>

#include "cvse/types.hpp"

namespace cvse {

/// Leave-one-out plan: identity fold maps, K = n per class, one repetition.
FoldPlan plan_cvn(int n1, int n2);

/// Single K-fold plan: each class is independently permuted uniformly at
/// random and folded canonically. Deterministic given the seed.
FoldPlan plan_cvk(int n1, int n2, int K1, int K2, std::uint64_t seed, bool ragged = false);

/// R independent exhaustive K-fold partitions per class.
FoldPlan plan_cvkr(int n1, int n2, int K, int R, std::uint64_t seed, bool ragged = false);

/// M independent uniform partitions per class; testing restricted to fold 0.
FoldPlan plan_cvkm(int n1, int n2, int K, int M, std::uint64_t seed, bool ragged = false);

/// Audit serialization: mode, fold counts, seed and explicit assignments
/// (0-based observation and fold indices).
nlohmann::json plan_to_json(const FoldPlan& plan);

} // namespace cvse
