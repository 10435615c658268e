#pragma once

#include <cstdint>
#include <vector>

#include "upm/dataset.hpp"

namespace upm {

/// Stratified partition of a dataset into k folds.
/// Invariants: every fold non-empty, fold sizes differ by at most 1,
/// per-class counts across folds differ by at most 1.
struct FoldPlan {
    int k = 0;
    std::vector<int> assignments;  // instance -> fold id in [0, k)
    std::uint64_t seed = 0;

    std::vector<int> test_indices(int fold) const;
    std::vector<int> train_indices(int fold) const;
    std::vector<int> fold_sizes() const;
};

/// Deterministic for fixed (ds, k, seed); remainders go to the
/// lowest-numbered folds. Within-class shuffling uses only the seeded
/// generator. Throws DataError for k < 2 or k > N.
FoldPlan stratified_kfold(const Dataset& ds, int k, std::uint64_t seed);

}  // namespace upm
