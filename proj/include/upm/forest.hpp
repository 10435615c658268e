#pragma once

#include <cstdint>
#include <vector>

#include "upm/tree.hpp"

namespace upm {

/// Bagged ensemble of random trees; prediction averages member
/// distributions with equal weight.
struct ForestModel {
    std::vector<TreeModel> trees;
    std::vector<std::uint64_t> member_seeds;
    std::uint64_t seed = 0;
    bool bootstrap = true;

    std::array<double, 2> predict(const std::vector<Cell>& row) const;
};

/// Member i trains on a bootstrap resample drawn with the seed
/// derive_seed(cfg.seed, i); disabling the bootstrap (test hook) trains
/// every member on the full data.
ForestModel train_random_forest(const Dataset& ds, const TrainConfig& cfg);

std::array<double, 2> predict_tree(const ForestModel& m, const std::vector<Cell>& row);

}  // namespace upm
