#include "cvse/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cvse/core.hpp"
#include "cvse/kernels.hpp"

namespace cvse {

namespace {

Matrix rows_excluding_fold(const Matrix& x, const FoldMap& map, int k) {
    Matrix out(x.rows() - static_cast<long>(map.members(k).size()), x.cols());
    long r = 0;
    for (int i = 0; i < x.rows(); ++i)
        if (map.assignment[i] != k) out.row(r++) = x.row(i);
    return out;
}

Matrix rows_of(const Matrix& x, const std::vector<int>& idx) {
    Matrix out(static_cast<long>(idx.size()), x.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<long>(r)) = x.row(idx[r]);
    return out;
}

struct CvkRepEval {
    Matrix fold_auc;              // K1 x K2
    std::vector<double> matched;  // diagonal when K1 == K2
    Matrix pair_psi;              // n1 x n2
    double auc = 0.0;
    int ridge_activations = 0;
};

// Full-pairing K-fold kernel for one repetition: one classifier per excluded
// fold pair, each (i, j) scored by the classifier excluding both its folds.
CvkRepEval eval_cvk_full(const TwoClassDataset& data, const ClassifierSpec& spec,
                         const FoldRep& rep, int rep_index) {
    const int K1 = rep.class1.K;
    const int K2 = rep.class2.K;
    CvkRepEval ev;
    ev.fold_auc.setZero(K1, K2);
    ev.pair_psi.setZero(data.n1(), data.n2());

    std::vector<double> s1, s2, psi_row;
    for (int k1 = 0; k1 < K1; ++k1) {
        const auto test1 = rep.class1.members(k1);
        const Matrix train1 = rows_excluding_fold(data.class1(), rep.class1, k1);
        for (int k2 = 0; k2 < K2; ++k2) {
            const auto test2 = rep.class2.members(k2);
            TrainedClassifier c = [&] {
                try {
                    return train(spec, train1, rows_excluding_fold(data.class2(), rep.class2, k2));
                } catch (const NumericalFailure& e) {
                    throw NumericalFailure(std::string(e.what()) + " [repetition " +
                                           std::to_string(rep_index) + ", folds (" +
                                           std::to_string(k1) + "," + std::to_string(k2) + ")]");
                }
            }();
            ev.ridge_activations += c.ridge_activations();

            s1.resize(test1.size());
            s2.resize(test2.size());
            c.score_rows(rows_of(data.class1(), test1), s1);
            c.score_rows(rows_of(data.class2(), test2), s2);

            psi_row.resize(test2.size());
            for (std::size_t a = 0; a < test1.size(); ++a) {
                kernels::psi_fill(s1[a], s2.data(), s2.size(), psi_row.data());
                for (std::size_t b = 0; b < test2.size(); ++b)
                    ev.pair_psi(test1[a], test2[b]) = psi_row[b];
            }
            ev.fold_auc(k1, k2) =
                kernels::psi_pair_sum(s1.data(), s1.size(), s2.data(), s2.size()) /
                (static_cast<double>(test1.size()) * static_cast<double>(test2.size()));
        }
    }
    ev.auc = ev.pair_psi.sum() / (static_cast<double>(data.n1()) * data.n2());
    if (K1 == K2) {
        ev.matched.resize(K1);
        for (int k = 0; k < K1; ++k) ev.matched[k] = ev.fold_auc(k, k);
    }
    return ev;
}

struct CvkMatchedEval {
    std::vector<double> matched;
    double auc = 0.0;
    int ridge_activations = 0;
};

// Matched pairing: K classifiers, testing folds of equal index only.
CvkMatchedEval eval_cvk_matched(const TwoClassDataset& data, const ClassifierSpec& spec,
                                const FoldRep& rep, int rep_index) {
    if (rep.class1.K != rep.class2.K)
        throw InvalidInput("matched pairing requires equal fold counts in both classes");
    const int K = rep.class1.K;
    CvkMatchedEval ev;
    ev.matched.resize(K);

    std::vector<double> s1, s2;
    for (int k = 0; k < K; ++k) {
        const auto test1 = rep.class1.members(k);
        const auto test2 = rep.class2.members(k);
        TrainedClassifier c = [&] {
            try {
                return train(spec, rows_excluding_fold(data.class1(), rep.class1, k),
                             rows_excluding_fold(data.class2(), rep.class2, k));
            } catch (const NumericalFailure& e) {
                throw NumericalFailure(std::string(e.what()) + " [repetition " +
                                       std::to_string(rep_index) + ", fold " + std::to_string(k) +
                                       "]");
            }
        }();
        ev.ridge_activations += c.ridge_activations();
        s1.resize(test1.size());
        s2.resize(test2.size());
        c.score_rows(rows_of(data.class1(), test1), s1);
        c.score_rows(rows_of(data.class2(), test2), s2);
        ev.matched[k] = kernels::psi_pair_sum(s1.data(), s1.size(), s2.data(), s2.size()) /
                        (static_cast<double>(test1.size()) * static_cast<double>(test2.size()));
    }
    ev.auc = 0.0;
    for (double a : ev.matched) ev.auc += a;
    ev.auc /= K;
    return ev;
}

void check_dims(const TwoClassDataset& data, const FoldPlan& plan) {
    if (plan.n1() != data.n1() || plan.n2() != data.n2())
        throw InvalidInput("plan and dataset sizes disagree");
}

// Identity leave-one-out plan, built locally to keep estimators independent
// of the resampling module.
FoldPlan identity_plan(const TwoClassDataset& data) {
    FoldPlan plan;
    plan.mode = CvMode::CVN;
    FoldRep rep;
    rep.class1.K = data.n1();
    rep.class1.base_fold_size = 1;
    rep.class1.assignment.resize(data.n1());
    for (int i = 0; i < data.n1(); ++i) rep.class1.assignment[i] = i;
    rep.class2.K = data.n2();
    rep.class2.base_fold_size = 1;
    rep.class2.assignment.resize(data.n2());
    for (int j = 0; j < data.n2(); ++j) rep.class2.assignment[j] = j;
    plan.reps.push_back(std::move(rep));
    return plan;
}

} // namespace

CvAucResult auc_cvn(const TwoClassDataset& data, const ClassifierSpec& spec) {
    return auc_cvk(data, spec, identity_plan(data), Pairing::Full);
}

CvAucResult auc_cvk(const TwoClassDataset& data, const ClassifierSpec& spec, const FoldPlan& plan,
                    Pairing pairing) {
    if (plan.mode != CvMode::CVK && plan.mode != CvMode::CVN)
        throw InvalidInput("auc_cvk: plan mode must be CVK or CVN");
    check_dims(data, plan);

    CvAucResult result;
    result.mode = plan.mode;
    result.pairing = pairing;
    result.K1 = plan.K1();
    result.K2 = plan.K2();

    if (pairing == Pairing::Full) {
        CvkRepEval ev = eval_cvk_full(data, spec, plan.reps.front(), 0);
        result.auc = ev.auc;
        result.per_fold_auc = std::move(ev.fold_auc);
        result.matched_auc = std::move(ev.matched);
        result.table.num = std::move(ev.pair_psi);
        result.table.den = Matrix::Ones(data.n1(), data.n2());
        result.ridge_activations = ev.ridge_activations;
        result.per_obs_auc1.resize(data.n1());
        result.per_obs_auc2.resize(data.n2());
        for (int i = 0; i < data.n1(); ++i)
            result.per_obs_auc1[i] = result.table.num.row(i).mean();
        for (int j = 0; j < data.n2(); ++j)
            result.per_obs_auc2[j] = result.table.num.col(j).mean();
    } else {
        CvkMatchedEval ev = eval_cvk_matched(data, spec, plan.reps.front(), 0);
        result.auc = ev.auc;
        result.matched_auc = std::move(ev.matched);
        result.ridge_activations = ev.ridge_activations;
    }
    return result;
}

CvAucResult auc_cvkr(const TwoClassDataset& data, const ClassifierSpec& spec, const FoldPlan& plan,
                     Pairing pairing) {
    if (plan.mode != CvMode::CVKR)
        throw InvalidInput("auc_cvkr: plan mode must be CVKR");
    check_dims(data, plan);
    const int R = plan.n_reps();

    CvAucResult result;
    result.mode = CvMode::CVKR;
    result.pairing = pairing;
    result.K1 = plan.K1();
    result.K2 = plan.K2();

    if (pairing == Pairing::Full) {
        Matrix psi_sum = Matrix::Zero(data.n1(), data.n2());
        result.per_rep_fold_auc.reserve(R);
        result.per_rep_auc.reserve(R);
        for (int m = 0; m < R; ++m) {
            CvkRepEval ev = eval_cvk_full(data, spec, plan.reps[m], m);
            psi_sum += ev.pair_psi;
            result.per_rep_auc.push_back(ev.auc);
            result.per_rep_matched_auc.push_back(std::move(ev.matched));
            result.per_rep_fold_auc.push_back(std::move(ev.fold_auc));
            result.ridge_activations += ev.ridge_activations;
        }
        double total = 0.0;
        for (double a : result.per_rep_auc) total += a;
        result.auc = total / R;
        result.table.num = std::move(psi_sum);
        result.table.den = Matrix::Constant(data.n1(), data.n2(), static_cast<double>(R));
        result.per_obs_auc1.resize(data.n1());
        result.per_obs_auc2.resize(data.n2());
        for (int i = 0; i < data.n1(); ++i)
            result.per_obs_auc1[i] = result.table.num.row(i).mean() / R;
        for (int j = 0; j < data.n2(); ++j)
            result.per_obs_auc2[j] = result.table.num.col(j).mean() / R;
    } else {
        double total = 0.0;
        for (int m = 0; m < R; ++m) {
            CvkMatchedEval ev = eval_cvk_matched(data, spec, plan.reps[m], m);
            total += ev.auc;
            result.per_rep_matched_auc.push_back(std::move(ev.matched));
            result.ridge_activations += ev.ridge_activations;
        }
        result.auc = total / R;
    }
    return result;
}

CvAucResult auc_cvkm(const TwoClassDataset& data, const ClassifierSpec& spec, const FoldPlan& plan,
                     DenPolicy policy) {
    if (plan.mode != CvMode::CVKM)
        throw InvalidInput("auc_cvkm: plan mode must be CVKM");
    check_dims(data, plan);
    const int n1 = data.n1();
    const int n2 = data.n2();
    const int M = plan.n_reps();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    CvAucResult result;
    result.mode = CvMode::CVKM;
    result.K1 = plan.K1();
    result.K2 = plan.K2();
    result.table.num = Matrix::Zero(n1, n2);
    result.table.den = Matrix::Zero(n1, n2);
    result.auc_11m.resize(M);
    result.reps.M = M;
    result.reps.n1 = n1;
    result.reps.n2 = n2;
    result.reps.scores1 = Matrix::Constant(M, n1, nan);
    result.reps.scores2 = Matrix::Constant(M, n2, nan);
    result.reps.ind1.assign(static_cast<std::size_t>(M) * n1, 0);
    result.reps.ind2.assign(static_cast<std::size_t>(M) * n2, 0);

    std::vector<double> s1, s2, psi_row;
    for (int m = 0; m < M; ++m) {
        const FoldRep& rep = plan.reps[m];
        const auto test1 = rep.class1.members(0);
        const auto test2 = rep.class2.members(0);
        TrainedClassifier c = [&] {
            try {
                return train(spec, rows_excluding_fold(data.class1(), rep.class1, 0),
                             rows_excluding_fold(data.class2(), rep.class2, 0));
            } catch (const NumericalFailure& e) {
                throw NumericalFailure(std::string(e.what()) + " [repetition " +
                                       std::to_string(m) + "]");
            }
        }();
        result.ridge_activations += c.ridge_activations();

        s1.resize(test1.size());
        s2.resize(test2.size());
        c.score_rows(rows_of(data.class1(), test1), s1);
        c.score_rows(rows_of(data.class2(), test2), s2);
        for (std::size_t a = 0; a < test1.size(); ++a) {
            result.reps.scores1(m, test1[a]) = s1[a];
            result.reps.ind1[static_cast<std::size_t>(m) * n1 + test1[a]] = 1;
        }
        for (std::size_t b = 0; b < test2.size(); ++b) {
            result.reps.scores2(m, test2[b]) = s2[b];
            result.reps.ind2[static_cast<std::size_t>(m) * n2 + test2[b]] = 1;
        }

        result.auc_11m[m] = kernels::psi_pair_sum(s1.data(), s1.size(), s2.data(), s2.size()) /
                            (static_cast<double>(s1.size()) * static_cast<double>(s2.size()));

        psi_row.resize(test2.size());
        for (std::size_t a = 0; a < test1.size(); ++a) {
            kernels::psi_fill(s1[a], s2.data(), s2.size(), psi_row.data());
            for (std::size_t b = 0; b < test2.size(); ++b) {
                result.table.num(test1[a], test2[b]) += psi_row[b];
                result.table.den(test1[a], test2[b]) += 1.0;
            }
        }
    }

    long uncovered = 0;
    int worst_i = -1, worst_j = -1;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            if (result.table.den(i, j) == 0.0) {
                ++uncovered;
                if (worst_i < 0) {
                    worst_i = i;
                    worst_j = j;
                }
            }
    if (uncovered > 0 && policy == DenPolicy::Strict) {
        const double miss_rate = 1.0 - 1.0 / (static_cast<double>(result.K1) * result.K2);
        const int suggested =
            static_cast<int>(std::ceil(std::log(static_cast<double>(n1) * n2 / 0.01) /
                                       -std::log(miss_rate)));
        throw CoverageError(
            "auc_cvkm: " + std::to_string(uncovered) + " pair(s) never co-occurred in a testing "
            "fold, first at (i=" + std::to_string(worst_i) + ", j=" + std::to_string(worst_j) +
            "); expected co-occurrence count is M/(K1*K2) = " +
            std::to_string(static_cast<double>(M) / (result.K1 * result.K2)) +
            ". Increase M (>= " + std::to_string(suggested) +
            " brings the miss probability below 1%) or use the skip policy.");
    }
    result.skipped_pairs = uncovered;

    double total = 0.0;
    long covered = 0;
    result.per_obs_auc1.assign(n1, 0.0);
    result.per_obs_auc2.assign(n2, 0.0);
    std::vector<long> row_cov(n1, 0), col_cov(n2, 0);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            if (result.table.den(i, j) > 0.0) {
                const double ratio = result.table.num(i, j) / result.table.den(i, j);
                total += ratio;
                ++covered;
                result.per_obs_auc1[i] += ratio;
                result.per_obs_auc2[j] += ratio;
                ++row_cov[i];
                ++col_cov[j];
            }
    if (covered == 0) throw CoverageError("auc_cvkm: no pair has testing coverage");
    result.auc = total / static_cast<double>(covered);
    for (int i = 0; i < n1; ++i) {
        if (row_cov[i] == 0)
            throw CoverageError("auc_cvkm: observation i=" + std::to_string(i) +
                                " of class 1 has no covered pair");
        result.per_obs_auc1[i] /= static_cast<double>(row_cov[i]);
    }
    for (int j = 0; j < n2; ++j) {
        if (col_cov[j] == 0)
            throw CoverageError("auc_cvkm: observation j=" + std::to_string(j) +
                                " of class 2 has no covered pair");
        result.per_obs_auc2[j] /= static_cast<double>(col_cov[j]);
    }
    return result;
}

CvErrResult err_cvk(const TwoClassDataset& data, const ClassifierSpec& spec,
                    const FoldPlan& plan) {
    if (plan.mode != CvMode::CVK && plan.mode != CvMode::CVN)
        throw InvalidInput("err_cvk: plan mode must be CVK or CVN");
    check_dims(data, plan);
    const FoldRep& rep = plan.reps.front();
    if (rep.class1.K != rep.class2.K)
        throw InvalidInput("err_cvk: matched folds require equal fold counts");
    const int K = rep.class1.K;
    const int n1 = data.n1();

    CvErrResult result;
    result.per_obs_error.assign(static_cast<std::size_t>(n1) + data.n2(), 0.0);
    result.per_fold_error.assign(K, 0.0);

    std::vector<double> s;
    for (int k = 0; k < K; ++k) {
        const auto test1 = rep.class1.members(k);
        const auto test2 = rep.class2.members(k);
        TrainedClassifier c = [&] {
            try {
                return train(spec, rows_excluding_fold(data.class1(), rep.class1, k),
                             rows_excluding_fold(data.class2(), rep.class2, k));
            } catch (const NumericalFailure& e) {
                throw NumericalFailure(std::string(e.what()) + " [fold " + std::to_string(k) +
                                       "]");
            }
        }();
        result.ridge_activations += c.ridge_activations();

        double fold_sum = 0.0;
        s.resize(test1.size());
        c.score_rows(rows_of(data.class1(), test1), s);
        for (std::size_t a = 0; a < test1.size(); ++a) {
            const double e = s[a] > 0.0 ? 0.0 : 1.0; // class 1 iff score > 0
            result.per_obs_error[test1[a]] = e;
            fold_sum += e;
        }
        s.resize(test2.size());
        c.score_rows(rows_of(data.class2(), test2), s);
        for (std::size_t b = 0; b < test2.size(); ++b) {
            const double e = s[b] > 0.0 ? 1.0 : 0.0;
            result.per_obs_error[static_cast<std::size_t>(n1) + test2[b]] = e;
            fold_sum += e;
        }
        result.per_fold_error[k] = fold_sum / (static_cast<double>(test1.size()) + test2.size());
    }
    double total = 0.0;
    for (double e : result.per_fold_error) total += e;
    result.err = total / K;
    return result;
}

} // namespace cvse
