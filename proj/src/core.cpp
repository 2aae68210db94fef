#include "cvse/core.hpp"

#include <cmath>
#include <numeric>

#include "cvse/kernels.hpp"

namespace cvse {

TwoClassDataset::TwoClassDataset(Matrix class1, Matrix class2)
    : class1_(std::move(class1)), class2_(std::move(class2)) {
    if (class1_.rows() < 2 || class2_.rows() < 2)
        throw InvalidInput("dataset: each class needs at least 2 observations");
    if (class1_.cols() < 1 || class1_.cols() != class2_.cols())
        throw InvalidInput("dataset: feature dimensions must match and be >= 1");
    if (!class1_.allFinite() || !class2_.allFinite())
        throw InvalidInput("dataset: non-finite feature value");
}

std::vector<int> FoldMap::fold_sizes() const {
    std::vector<int> sizes(K, 0);
    for (int f : assignment) sizes.at(f)++;
    return sizes;
}

std::vector<int> FoldMap::members(int k) const {
    std::vector<int> out;
    for (int i = 0; i < n(); ++i)
        if (assignment[i] == k) out.push_back(i);
    return out;
}

void FoldMap::validate() const {
    if (K < 2 || K > n()) throw InvalidInput("fold map: K out of range [2, n]");
    const auto sizes = fold_sizes();
    const int extra = n() % K;
    for (int k = 0; k < K; ++k) {
        const int want = base_fold_size + (k < extra ? 1 : 0);
        if (sizes[k] != want)
            throw InvalidInput("fold map: fold " + std::to_string(k) + " has " +
                               std::to_string(sizes[k]) + " members, expected " +
                               std::to_string(want));
    }
}

const char* to_string(CvMode mode) {
    switch (mode) {
        case CvMode::CVN: return "cvn";
        case CvMode::CVK: return "cvk";
        case CvMode::CVKR: return "cvkr";
        case CvMode::CVKM: return "cvkm";
    }
    return "?";
}

const char* to_string(Pairing pairing) {
    return pairing == Pairing::Full ? "full" : "matched";
}

void FoldPlan::validate() const {
    if (reps.empty()) throw InvalidInput("fold plan: no repetitions");
    for (const auto& rep : reps) {
        rep.class1.validate();
        rep.class2.validate();
    }
    if (mode == CvMode::CVN) {
        if (reps.size() != 1 || K1() != n1() || K2() != n2())
            throw InvalidInput("fold plan: CVN requires one repetition with K = n");
    }
    if ((mode == CvMode::CVN || mode == CvMode::CVK) && reps.size() != 1)
        throw InvalidInput("fold plan: single-repetition mode holds several repetitions");
}

double psi(double a, double b, double tie_tol) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw InvalidInput("psi: non-finite score");
    if (tie_tol > 0.0) {
        if (std::abs(a - b) <= tie_tol) return 0.5;
        return a > b ? 1.0 : 0.0;
    }
    return a > b ? 1.0 : (a == b ? 0.5 : 0.0);
}

double empirical_auc(std::span<const double> scores1, std::span<const double> scores2,
                     double tie_tol) {
    if (scores1.empty() || scores2.empty())
        throw InvalidInput("empirical_auc: empty score vector");
    for (double s : scores1)
        if (!std::isfinite(s)) throw InvalidInput("empirical_auc: non-finite score");
    for (double s : scores2)
        if (!std::isfinite(s)) throw InvalidInput("empirical_auc: non-finite score");
    double sum;
    if (tie_tol > 0.0) {
        sum = 0.0;
        for (double a : scores1)
            for (double b : scores2) sum += psi(a, b, tie_tol);
    } else {
        sum = kernels::psi_pair_sum(scores1.data(), scores1.size(), scores2.data(),
                                    scores2.size());
    }
    return sum / (static_cast<double>(scores1.size()) * static_cast<double>(scores2.size()));
}

FoldMap fold_map_canonical(int n, int K, bool ragged) {
    if (n < 2) throw InvalidInput("fold map: n must be >= 2");
    if (K < 2 || K > n) throw InvalidInput("fold map: K out of range [2, n]");
    if (n % K != 0 && !ragged)
        throw InvalidInput("fold map: K does not divide n (enable ragged mode for that)");

    FoldMap map;
    map.K = K;
    map.base_fold_size = n / K;
    map.assignment.resize(n);
    const int extra = n % K; // first `extra` folds take one more observation
    int i = 0;
    for (int k = 0; k < K; ++k) {
        const int size = map.base_fold_size + (k < extra ? 1 : 0);
        for (int s = 0; s < size; ++s) map.assignment[i++] = k;
    }
    return map;
}

} // namespace cvse
