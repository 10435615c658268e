#include <doctest.h>

#include <algorithm>
#include <set>

#include "upm/errors.hpp"
#include "upm/folds.hpp"
#include "upm/rng.hpp"

using namespace upm;

namespace {

Dataset make_labeled(int n_placed, int n_unplaced) {
    std::vector<AttributeDescriptor> attrs{{"x", AttrKind::Numeric, {}, 0}};
    std::vector<std::vector<Cell>> rows;
    std::vector<Label> labels;
    for (int i = 0; i < n_placed + n_unplaced; ++i) {
        rows.push_back({Cell::numeric(i)});
        labels.push_back(i < n_placed ? Label::Placed : Label::Unplaced);
    }
    return Dataset({"synthetic", "test"}, attrs, std::move(rows), std::move(labels));
}

void check_invariants(const Dataset& ds, const FoldPlan& plan) {
    const auto sizes = plan.fold_sizes();
    const auto mm = std::minmax_element(sizes.begin(), sizes.end());
    CHECK(*mm.first >= 1);
    CHECK(*mm.second - *mm.first <= 1);
    for (int cls = 0; cls < kNumClasses; ++cls) {
        std::vector<int> per_fold(static_cast<std::size_t>(plan.k), 0);
        for (int i = 0; i < ds.n_rows(); ++i)
            if (static_cast<int>(ds.label(i)) == cls)
                ++per_fold[static_cast<std::size_t>(plan.assignments[static_cast<std::size_t>(i)])];
        const auto cm = std::minmax_element(per_fold.begin(), per_fold.end());
        CHECK(*cm.second - *cm.first <= 1);
    }
    // Union of folds covers every instance exactly once.
    std::size_t total = 0;
    for (int f = 0; f < plan.k; ++f) total += plan.test_indices(f).size();
    CHECK(total == static_cast<std::size_t>(ds.n_rows()));
}

}  // namespace

TEST_SUITE("core_data.folds") {

TEST_CASE("100 instances 60/40 into 10 folds gives exact 6+4 strata") {
    const Dataset ds = make_labeled(60, 40);
    const FoldPlan plan = stratified_kfold(ds, 10, 7);
    for (int f = 0; f < 10; ++f) {
        const auto test = plan.test_indices(f);
        CHECK(test.size() == 10);
        int placed = 0;
        for (int i : test)
            if (ds.label(i) == Label::Placed) ++placed;
        CHECK(placed == 6);
    }
}

TEST_CASE("32 instances into 10 folds: two folds of 4, eight of 3") {
    const Dataset ds = make_labeled(20, 12);
    const FoldPlan plan = stratified_kfold(ds, 10, 3);
    auto sizes = plan.fold_sizes();
    CHECK(std::count(sizes.begin(), sizes.end(), 4) == 2);
    CHECK(std::count(sizes.begin(), sizes.end(), 3) == 8);
    check_invariants(ds, plan);
}

TEST_CASE("invalid fold counts are rejected") {
    const Dataset ds = make_labeled(5, 5);
    CHECK_THROWS_AS(stratified_kfold(ds, 1, 1), DataError);
    CHECK_THROWS_AS(stratified_kfold(ds, 0, 1), DataError);
    CHECK_THROWS_AS(stratified_kfold(ds, 11, 1), DataError);
}

TEST_CASE("same seed reproduces the plan, different seeds usually differ") {
    const Dataset ds = make_labeled(30, 20);
    const FoldPlan a = stratified_kfold(ds, 5, 42);
    const FoldPlan b = stratified_kfold(ds, 5, 42);
    CHECK(a.assignments == b.assignments);
    const FoldPlan c = stratified_kfold(ds, 5, 43);
    CHECK(a.assignments != c.assignments);
}

TEST_CASE("invariants hold across randomized shapes") {
    Rng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const int k = 2 + static_cast<int>(rng.next_below(9));
        const int placed = 1 + static_cast<int>(rng.next_below(40));
        const int unplaced = 1 + static_cast<int>(rng.next_below(40));
        if (placed + unplaced < k) continue;
        const Dataset ds = make_labeled(placed, unplaced);
        const FoldPlan plan = stratified_kfold(ds, k, rng.next_u64());
        check_invariants(ds, plan);
    }
}

TEST_CASE("remainders land in the lowest-numbered folds") {
    const Dataset ds = make_labeled(7, 6);  // 13 = 4+3+3+3 over k=4
    const FoldPlan plan = stratified_kfold(ds, 4, 11);
    CHECK(plan.fold_sizes() == std::vector<int>{4, 3, 3, 3});
}

}  // TEST_SUITE
