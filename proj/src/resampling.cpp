#include "cvse/resampling.hpp"

#include <numeric>

#include "cvse/core.hpp"
#include "cvse/rng.hpp"

namespace cvse {

namespace {

// Uniform random partition: permute, then fold canonically. This realizes
// the uniform distribution over partitions (probability 1 / prod of
// binomials), which is the probability model behind the training-set
// perturbation formulas.
FoldMap random_fold_map(int n, int K, rng::Stream& stream, bool ragged) {
    const FoldMap canonical = fold_map_canonical(n, K, ragged);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    stream.shuffle(perm);
    FoldMap map;
    map.K = K;
    map.base_fold_size = canonical.base_fold_size;
    map.assignment.resize(n);
    for (int i = 0; i < n; ++i) map.assignment[perm[i]] = canonical.assignment[i];
    return map;
}

FoldMap identity_fold_map(int n) {
    FoldMap map;
    map.K = n;
    map.base_fold_size = 1;
    map.assignment.resize(n);
    std::iota(map.assignment.begin(), map.assignment.end(), 0);
    return map;
}

// Stream ids: repetition m uses streams (2m, 2m+1) for the two classes, so
// plans are independent of generation order.
FoldRep random_rep(int n1, int n2, int K1, int K2, std::uint64_t seed, int m, bool ragged) {
    rng::Stream s1(seed, 2 * static_cast<std::uint64_t>(m));
    rng::Stream s2(seed, 2 * static_cast<std::uint64_t>(m) + 1);
    return FoldRep{random_fold_map(n1, K1, s1, ragged), random_fold_map(n2, K2, s2, ragged)};
}

} // namespace

FoldPlan plan_cvn(int n1, int n2) {
    if (n1 < 2 || n2 < 2) throw InvalidInput("plan_cvn: class sizes must be >= 2");
    FoldPlan plan;
    plan.mode = CvMode::CVN;
    plan.reps.push_back(FoldRep{identity_fold_map(n1), identity_fold_map(n2)});
    plan.validate();
    return plan;
}

FoldPlan plan_cvk(int n1, int n2, int K1, int K2, std::uint64_t seed, bool ragged) {
    FoldPlan plan;
    plan.mode = CvMode::CVK;
    plan.seed = seed;
    plan.reps.push_back(random_rep(n1, n2, K1, K2, seed, 0, ragged));
    plan.validate();
    return plan;
}

FoldPlan plan_cvkr(int n1, int n2, int K, int R, std::uint64_t seed, bool ragged) {
    if (R < 1) throw InvalidInput("plan_cvkr: R must be >= 1");
    FoldPlan plan;
    plan.mode = CvMode::CVKR;
    plan.seed = seed;
    plan.reps.reserve(R);
    for (int m = 0; m < R; ++m) plan.reps.push_back(random_rep(n1, n2, K, K, seed, m, ragged));
    plan.validate();
    return plan;
}

FoldPlan plan_cvkm(int n1, int n2, int K, int M, std::uint64_t seed, bool ragged) {
    if (M < 1) throw InvalidInput("plan_cvkm: M must be >= 1");
    FoldPlan plan;
    plan.mode = CvMode::CVKM;
    plan.seed = seed;
    plan.reps.reserve(M);
    for (int m = 0; m < M; ++m) plan.reps.push_back(random_rep(n1, n2, K, K, seed, m, ragged));
    plan.validate();
    return plan;
}

nlohmann::json plan_to_json(const FoldPlan& plan) {
    nlohmann::json j;
    j["mode"] = to_string(plan.mode);
    j["seed"] = plan.seed;
    j["K1"] = plan.K1();
    j["K2"] = plan.K2();
    j["n1"] = plan.n1();
    j["n2"] = plan.n2();
    j["index_base"] = 0;
    auto reps = nlohmann::json::array();
    for (const auto& rep : plan.reps) {
        reps.push_back({{"class1", rep.class1.assignment}, {"class2", rep.class2.assignment}});
    }
    j["repetitions"] = std::move(reps);
    return j;
}

} // namespace cvse
