#include "upm/forest.hpp"

#include "upm/errors.hpp"
#include "upm/rng.hpp"

namespace upm {

std::array<double, 2> ForestModel::predict(const std::vector<Cell>& row) const {
    std::array<double, 2> sum{0.0, 0.0};
    for (const auto& tree : trees) {
        const auto d = tree.predict(row);
        sum[0] += d[0];
        sum[1] += d[1];
    }
    const double n = static_cast<double>(trees.size());
    return {sum[0] / n, sum[1] / n};
}

ForestModel train_random_forest(const Dataset& ds, const TrainConfig& cfg) {
    if (cfg.forest.n_trees < 1) throw ConfigError("forest needs at least one tree");
    ForestModel forest;
    forest.seed = cfg.seed;
    forest.bootstrap = cfg.forest.bootstrap;
    const int n = ds.n_rows();
    for (int i = 0; i < cfg.forest.n_trees; ++i) {
        const std::uint64_t tree_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
        TrainConfig member_cfg = cfg;
        member_cfg.seed = tree_seed;
        if (cfg.forest.bootstrap) {
            Rng boot(derive_seed(tree_seed, 0xB0075u));
            std::vector<int> sample(static_cast<std::size_t>(n));
            for (int r = 0; r < n; ++r)
                sample[static_cast<std::size_t>(r)] =
                    static_cast<int>(boot.next_below(static_cast<std::uint64_t>(n)));
            forest.trees.push_back(train_random_tree(subset_rows(ds, sample), member_cfg));
        } else {
            forest.trees.push_back(train_random_tree(ds, member_cfg));
        }
        forest.member_seeds.push_back(tree_seed);
    }
    return forest;
}

std::array<double, 2> predict_tree(const ForestModel& m, const std::vector<Cell>& row) {
    return m.predict(row);
}

}  // namespace upm
