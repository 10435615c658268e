#include "upm/folds.hpp"

#include <algorithm>
#include <string>

#include "upm/errors.hpp"
#include "upm/rng.hpp"

namespace upm {

std::vector<int> FoldPlan::test_indices(int fold) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] == fold) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> FoldPlan::train_indices(int fold) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] != fold) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> FoldPlan::fold_sizes() const {
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int f : assignments) ++sizes[static_cast<std::size_t>(f)];
    return sizes;
}

FoldPlan stratified_kfold(const Dataset& ds, int k, std::uint64_t seed) {
    const int n = ds.n_rows();
    if (k < 2) throw DataError("fold count must be at least 2, got " + std::to_string(k));
    if (k > n)
        throw DataError("fold count " + std::to_string(k) + " exceeds instance count " +
                        std::to_string(n));

    // Target fold sizes: N/k each, remainder to the lowest-numbered folds.
    std::vector<int> target(static_cast<std::size_t>(k), n / k);
    for (int f = 0; f < n % k; ++f) ++target[static_cast<std::size_t>(f)];

    std::vector<std::vector<int>> by_class(kNumClasses);
    for (int i = 0; i < n; ++i)
        by_class[static_cast<std::size_t>(static_cast<int>(ds.label(i)))].push_back(i);

    Rng rng(seed);
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(static_cast<std::size_t>(n), -1);

    // Quota per (class, fold): base share first, then each class's remainder
    // goes one-per-fold to the folds with the most unfilled capacity
    // (ties to the lower fold id). Capacity bookkeeping keeps total fold
    // sizes on target, so both the size and the stratification invariants
    // hold simultaneously.
    std::vector<int> assigned(static_cast<std::size_t>(k), 0);
    std::vector<std::vector<int>> quota(kNumClasses, std::vector<int>(static_cast<std::size_t>(k), 0));
    for (int cls = 0; cls < kNumClasses; ++cls) {
        const int nc = static_cast<int>(by_class[static_cast<std::size_t>(cls)].size());
        const int base = nc / k;
        for (int f = 0; f < k; ++f) {
            quota[static_cast<std::size_t>(cls)][static_cast<std::size_t>(f)] = base;
            assigned[static_cast<std::size_t>(f)] += base;
        }
    }
    for (int cls = 0; cls < kNumClasses; ++cls) {
        const int nc = static_cast<int>(by_class[static_cast<std::size_t>(cls)].size());
        int extras = nc % k;
        std::vector<char> used(static_cast<std::size_t>(k), 0);
        while (extras-- > 0) {
            int best = -1;
            int best_cap = -1;
            for (int f = 0; f < k; ++f) {
                if (used[static_cast<std::size_t>(f)]) continue;
                const int cap = target[static_cast<std::size_t>(f)] - assigned[static_cast<std::size_t>(f)];
                if (cap > best_cap) {
                    best_cap = cap;
                    best = f;
                }
            }
            quota[static_cast<std::size_t>(cls)][static_cast<std::size_t>(best)] += 1;
            assigned[static_cast<std::size_t>(best)] += 1;
            used[static_cast<std::size_t>(best)] = 1;
        }
    }

    for (int cls = 0; cls < kNumClasses; ++cls) {
        auto& members = by_class[static_cast<std::size_t>(cls)];
        rng.shuffle(members);
        std::size_t pos = 0;
        for (int f = 0; f < k; ++f) {
            for (int q = 0; q < quota[static_cast<std::size_t>(cls)][static_cast<std::size_t>(f)]; ++q)
                plan.assignments[static_cast<std::size_t>(members[pos++])] = f;
        }
    }

    const auto sizes = plan.fold_sizes();
    const auto mm = std::minmax_element(sizes.begin(), sizes.end());
    if (*mm.first == 0 || *mm.second - *mm.first > 1)
        throw DataError("stratified fold invariants unsatisfiable for k=" + std::to_string(k) +
                        ", N=" + std::to_string(n));
    return plan;
}

}  // namespace upm
