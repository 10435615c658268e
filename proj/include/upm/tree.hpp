#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "upm/dataset.hpp"

namespace upm {

/// Binary split test; true routes to the left child.
struct SplitPredicate {
    enum class Kind { NumericLe, CategoricalIn };

    int attr = -1;
    Kind kind = Kind::NumericLe;
    double threshold = 0.0;          // NumericLe: value <= threshold
    std::vector<int> categories;     // CategoricalIn: category id in set

    bool eval(const std::vector<Cell>& row) const;
};

struct TreeNode {
    bool leaf = true;
    SplitPredicate pred;
    int left = -1;
    int right = -1;
    std::array<std::int64_t, 2> counts{0, 0};  // training class counts
    std::array<double, 2> dist{0.0, 0.0};      // normalized distribution
};

struct TreeMeta {
    std::string algorithm;
    std::uint64_t seed = 0;
    int depth = 0;
    int leaves = 0;
};

/// Binary decision tree in preorder storage (root = node 0), shared by
/// CART, Random Tree and the forest members.
struct TreeModel {
    std::vector<TreeNode> nodes;
    TreeMeta meta;

    int route(const std::vector<Cell>& row) const;  // leaf node index
    std::array<double, 2> predict(const std::vector<Cell>& row) const;
    bool operator==(const TreeModel& o) const;
};

struct CartConfig {
    int min_leaf = 2;
    int prune_folds = 5;
    bool one_se_rule = true;
    bool prune = true;
};

struct RTreeConfig {
    int k_attrs = 0;  // 0 = floor(log2(A)) + 1
    int min_leaf = 1;
};

struct ForestConfig {
    int n_trees = 100;
    bool bootstrap = true;  // disable only as a test hook
};

struct KStarConfig {
    double blend = 20.0;  // percentage in (0, 100]
};

/// Hyperparameters for all four base learners. The paper names the
/// algorithms but no settings; these defaults mirror the conventional
/// choices of the era's toolkits and are all overridable.
struct TrainConfig {
    std::uint64_t seed = 1;
    CartConfig cart;
    RTreeConfig rtree;
    ForestConfig forest;
    KStarConfig kstar;
};

/// Gini impurity 1 - sum p_i^2; in [0, 0.5] for two classes.
double gini(const std::vector<std::int64_t>& class_counts);

/// Greedy Gini-decrease growth (numeric midpoints, one-category-vs-rest),
/// then minimal cost-complexity pruning with prune_folds-fold internal CV
/// and the 1-SE rule when configured.
TreeModel train_cart(const Dataset& ds, const TrainConfig& cfg);

/// Unpruned tree considering a seeded sample of k_attrs attributes per node.
TreeModel train_random_tree(const Dataset& ds, const TrainConfig& cfg);

std::array<double, 2> predict_tree(const TreeModel& m, const std::vector<Cell>& row);

}  // namespace upm
