#include <doctest.h>

#include "cvse/resampling.hpp"

using namespace cvse;

TEST_CASE("plan_cvn builds identity folds") {
    const FoldPlan p33 = plan_cvn(3, 3);
    CHECK(p33.mode == CvMode::CVN);
    CHECK(p33.reps.size() == 1);
    CHECK(p33.reps[0].class1.assignment == std::vector<int>{0, 1, 2});
    CHECK(p33.reps[0].class2.assignment == std::vector<int>{0, 1, 2});

    const FoldPlan p22 = plan_cvn(2, 2);
    CHECK(p22.K1() == 2);
    CHECK(p22.K2() == 2);
    CHECK_THROWS_AS(plan_cvn(1, 3), InvalidInput);
}

TEST_CASE("plan_cvk produces balanced partitions deterministically") {
    const FoldPlan a = plan_cvk(12, 8, 4, 2, 2024);
    const FoldPlan b = plan_cvk(12, 8, 4, 2, 2024);
    CHECK(a.reps[0].class1.assignment == b.reps[0].class1.assignment);
    CHECK(a.reps[0].class2.assignment == b.reps[0].class2.assignment);
    a.validate();
    for (int size : a.reps[0].class1.fold_sizes()) CHECK(size == 3);
    for (int size : a.reps[0].class2.fold_sizes()) CHECK(size == 4);

    const FoldPlan c = plan_cvk(12, 8, 4, 2, 2025);
    CHECK(a.reps[0].class1.assignment != c.reps[0].class1.assignment);

    CHECK_THROWS_AS(plan_cvk(12, 8, 5, 2, 1), InvalidInput); // 5 does not divide 12
    CHECK_NOTHROW(plan_cvk(12, 8, 5, 2, 1, true));
}

TEST_CASE("plan_cvkr with R=1 equals plan_cvk with the same seed") {
    const FoldPlan kr = plan_cvkr(10, 10, 5, 1, 77);
    const FoldPlan k = plan_cvk(10, 10, 5, 5, 77);
    CHECK(kr.reps[0].class1.assignment == k.reps[0].class1.assignment);
    CHECK(kr.reps[0].class2.assignment == k.reps[0].class2.assignment);
}

TEST_CASE("plan_cvkr repetitions are exhaustive partitions") {
    const FoldPlan plan = plan_cvkr(10, 10, 5, 7, 3);
    CHECK(plan.n_reps() == 7);
    plan.validate();
    bool all_same = true;
    for (const auto& rep : plan.reps)
        if (rep.class1.assignment != plan.reps[0].class1.assignment) all_same = false;
    CHECK_FALSE(all_same);
}

TEST_CASE("plan_cvkm fold-0 membership frequency is near 1/K") {
    const int M = 1000;
    const FoldPlan plan = plan_cvkm(10, 10, 5, M, 12345);
    for (int i = 0; i < 10; ++i) {
        int hits = 0;
        for (const auto& rep : plan.reps)
            if (rep.class1.assignment[i] == 0) ++hits;
        const double freq = static_cast<double>(hits) / M;
        CHECK(freq > 0.17);
        CHECK(freq < 0.23);
    }
}

TEST_CASE("plan_cvkm with K=n and M=1 puts exactly one observation in the testing fold") {
    const FoldPlan plan = plan_cvkm(4, 4, 4, 1, 9);
    CHECK(plan.reps[0].class1.members(0).size() == 1);
    CHECK(plan.reps[0].class2.members(0).size() == 1);
}

TEST_CASE("plan_cvkm determinism and repetition independence of order") {
    const FoldPlan a = plan_cvkm(8, 8, 4, 20, 55);
    const FoldPlan b = plan_cvkm(8, 8, 4, 20, 55);
    for (int m = 0; m < 20; ++m) {
        CHECK(a.reps[m].class1.assignment == b.reps[m].class1.assignment);
        CHECK(a.reps[m].class2.assignment == b.reps[m].class2.assignment);
    }
    // Repetition m of a longer plan matches the same m of a shorter plan.
    const FoldPlan longer = plan_cvkm(8, 8, 4, 40, 55);
    CHECK(longer.reps[19].class1.assignment == a.reps[19].class1.assignment);
}

TEST_CASE("plan JSON audit document") {
    const FoldPlan plan = plan_cvkm(6, 4, 2, 3, 101);
    const nlohmann::json j = plan_to_json(plan);
    CHECK(j["mode"] == "cvkm");
    CHECK(j["seed"] == 101);
    CHECK(j["K1"] == 2);
    CHECK(j["index_base"] == 0);
    CHECK(j["repetitions"].size() == 3);
    CHECK(j["repetitions"][0]["class1"].size() == 6);
    CHECK(j["repetitions"][0]["class2"].size() == 4);
}

TEST_CASE("fold plan validation rejects unbalanced maps") {
    FoldPlan plan = plan_cvk(6, 6, 3, 3, 1);
    plan.reps[0].class1.assignment[0] = plan.reps[0].class1.assignment[1];
    bool balanced = true;
    try {
        plan.validate();
    } catch (const InvalidInput&) {
        balanced = false;
    }
    CHECK_FALSE(balanced);
}
