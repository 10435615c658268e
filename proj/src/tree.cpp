#include "upm/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "upm/errors.hpp"
#include "upm/folds.hpp"
#include "upm/rng.hpp"

namespace upm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gini_of(std::int64_t a, std::int64_t b) {
    const double n = static_cast<double>(a + b);
    const double pa = static_cast<double>(a) / n;
    const double pb = static_cast<double>(b) / n;
    return 1.0 - (pa * pa + pb * pb);
}

// Impure nodes take the best valid split even at zero gain (ties go to the
// lowest attribute, then the smallest threshold); growth stops only at
// purity, min_leaf, or when no valid split exists. Greedy positive-gain
// stopping cannot memorize XOR-style patterns.
struct BestSplit {
    bool found = false;
    double gain = -1.0;
    SplitPredicate pred;
};

struct Grower {
    const Dataset& ds;
    int min_leaf;
    int k_attrs;  // 0 or >= A: consider every attribute
    Rng* rng;     // attribute sampling stream (random tree only)
    std::vector<TreeNode> nodes;
    int max_depth = 0;

    Grower(const Dataset& d, int ml, int ka, Rng* r) : ds(d), min_leaf(ml), k_attrs(ka), rng(r) {}

    std::array<std::int64_t, 2> count(const std::vector<int>& idx) const {
        std::array<std::int64_t, 2> c{0, 0};
        for (int i : idx) ++c[static_cast<std::size_t>(static_cast<int>(ds.label(i)))];
        return c;
    }

    void search_numeric(int attr, const std::vector<int>& idx, double parent_gini,
                        BestSplit& best) const {
        std::vector<std::pair<double, int>> vals;
        vals.reserve(idx.size());
        for (int i : idx)
            vals.emplace_back(ds.cell(i, attr).value, static_cast<int>(ds.label(i)));
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        const std::int64_t n = static_cast<std::int64_t>(vals.size());
        std::int64_t left0 = 0, left1 = 0;
        std::int64_t total0 = 0, total1 = 0;
        for (const auto& [v, l] : vals) (l == 0 ? total0 : total1)++;
        for (std::int64_t i = 0; i < n - 1; ++i) {
            (vals[static_cast<std::size_t>(i)].second == 0 ? left0 : left1)++;
            if (vals[static_cast<std::size_t>(i)].first ==
                vals[static_cast<std::size_t>(i + 1)].first)
                continue;
            const std::int64_t nl = i + 1;
            const std::int64_t nr = n - nl;
            if (nl < min_leaf || nr < min_leaf) continue;
            const double wl = static_cast<double>(nl) / static_cast<double>(n);
            const double gain = parent_gini - wl * gini_of(left0, left1) -
                                (1.0 - wl) * gini_of(total0 - left0, total1 - left1);
            if (gain > best.gain) {
                best.found = true;
                best.gain = gain;
                best.pred.attr = attr;
                best.pred.kind = SplitPredicate::Kind::NumericLe;
                // Midpoint rule: the threshold never equals a data value.
                best.pred.threshold = 0.5 * (vals[static_cast<std::size_t>(i)].first +
                                             vals[static_cast<std::size_t>(i + 1)].first);
                best.pred.categories.clear();
            }
        }
    }

    void search_categorical(int attr, const std::vector<int>& idx, double parent_gini,
                            BestSplit& best) const {
        const int n_cats = static_cast<int>(ds.attribute(attr).categories.size());
        if (n_cats < 2) return;
        std::vector<std::array<std::int64_t, 2>> per_cat(
            static_cast<std::size_t>(n_cats), std::array<std::int64_t, 2>{0, 0});
        std::int64_t total0 = 0, total1 = 0;
        for (int i : idx) {
            const int cls = static_cast<int>(ds.label(i));
            ++per_cat[static_cast<std::size_t>(ds.cell(i, attr).category_id())]
                     [static_cast<std::size_t>(cls)];
            (cls == 0 ? total0 : total1)++;
        }
        const std::int64_t n = total0 + total1;
        for (int c = 0; c < n_cats; ++c) {
            const std::int64_t l0 = per_cat[static_cast<std::size_t>(c)][0];
            const std::int64_t l1 = per_cat[static_cast<std::size_t>(c)][1];
            const std::int64_t nl = l0 + l1;
            const std::int64_t nr = n - nl;
            if (nl < min_leaf || nr < min_leaf) continue;
            const double wl = static_cast<double>(nl) / static_cast<double>(n);
            const double gain = parent_gini - wl * gini_of(l0, l1) -
                                (1.0 - wl) * gini_of(total0 - l0, total1 - l1);
            if (gain > best.gain) {
                best.found = true;
                best.gain = gain;
                best.pred.attr = attr;
                best.pred.kind = SplitPredicate::Kind::CategoricalIn;
                best.pred.categories = {c};
            }
        }
    }

    int grow(const std::vector<int>& idx, int depth) {
        max_depth = std::max(max_depth, depth);
        const int self = static_cast<int>(nodes.size());
        nodes.emplace_back();
        auto counts = count(idx);
        nodes[static_cast<std::size_t>(self)].counts = counts;
        const double total = static_cast<double>(counts[0] + counts[1]);
        nodes[static_cast<std::size_t>(self)].dist = {static_cast<double>(counts[0]) / total,
                                                      static_cast<double>(counts[1]) / total};
        const bool pure = counts[0] == 0 || counts[1] == 0;
        if (pure || static_cast<int>(idx.size()) < 2 * min_leaf) return self;

        std::vector<int> attrs;
        const int a = ds.n_attributes();
        if (k_attrs > 0 && k_attrs < a && rng != nullptr) {
            attrs = rng->sample_without_replacement(a, k_attrs);
        } else {
            attrs.resize(static_cast<std::size_t>(a));
            for (int i = 0; i < a; ++i) attrs[static_cast<std::size_t>(i)] = i;
        }

        BestSplit best;
        const double parent_gini = gini_of(counts[0], counts[1]);
        for (int attr : attrs) {
            if (ds.attribute(attr).kind == AttrKind::Numeric)
                search_numeric(attr, idx, parent_gini, best);
            else
                search_categorical(attr, idx, parent_gini, best);
        }
        if (!best.found) return self;

        std::vector<int> left_idx, right_idx;
        for (int i : idx)
            (best.pred.eval(ds.row(i)) ? left_idx : right_idx).push_back(i);

        nodes[static_cast<std::size_t>(self)].leaf = false;
        nodes[static_cast<std::size_t>(self)].pred = best.pred;
        const int left = grow(left_idx, depth + 1);
        nodes[static_cast<std::size_t>(self)].left = left;
        const int right = grow(right_idx, depth + 1);
        nodes[static_cast<std::size_t>(self)].right = right;
        return self;
    }
};

TreeModel grow_tree(const Dataset& ds, int min_leaf, int k_attrs, Rng* rng,
                    const std::string& algorithm, std::uint64_t seed) {
    if (ds.n_rows() < 2) throw DataError("tree training requires at least 2 instances");
    if (ds.has_missing())
        throw DataError("tree training requires a dataset with no missing cells");
    Grower g(ds, min_leaf, k_attrs, rng);
    std::vector<int> all(static_cast<std::size_t>(ds.n_rows()));
    for (int i = 0; i < ds.n_rows(); ++i) all[static_cast<std::size_t>(i)] = i;
    g.grow(all, 0);
    TreeModel m;
    m.nodes = std::move(g.nodes);
    m.meta.algorithm = algorithm;
    m.meta.seed = seed;
    m.meta.depth = g.max_depth;
    m.meta.leaves = 0;
    for (const auto& node : m.nodes)
        if (node.leaf) ++m.meta.leaves;
    return m;
}

// ---- minimal cost-complexity pruning -------------------------------------

struct PruneInfo {
    std::int64_t errors = 0;  // misclassified count if subtree kept
    int leaves = 0;
};

// Error/leaf totals of the live subtree under `collapse`d markers.
PruneInfo subtree_info(const TreeModel& t, const std::vector<double>& collapse_alpha,
                       double alpha, int node) {
    const auto& nd = t.nodes[static_cast<std::size_t>(node)];
    if (nd.leaf || collapse_alpha[static_cast<std::size_t>(node)] <= alpha) {
        return {nd.counts[0] + nd.counts[1] - std::max(nd.counts[0], nd.counts[1]), 1};
    }
    const PruneInfo l = subtree_info(t, collapse_alpha, alpha, nd.left);
    const PruneInfo r = subtree_info(t, collapse_alpha, alpha, nd.right);
    return {l.errors + r.errors, l.leaves + r.leaves};
}

// Weakest-link pass: assigns each internal node the alpha at which it
// collapses and returns the increasing alpha sequence.
std::vector<double> compute_collapse_alphas(const TreeModel& t,
                                            std::vector<double>& collapse_alpha) {
    const double n = [&] {
        const auto& root = t.nodes[0];
        return static_cast<double>(root.counts[0] + root.counts[1]);
    }();
    collapse_alpha.assign(t.nodes.size(), kInf);
    std::vector<double> alphas;
    double prev = 0.0;
    if (t.nodes[0].leaf) return alphas;
    for (;;) {
        // g(t) over live internal nodes.
        double min_g = kInf;
        std::vector<int> stack{0};
        std::vector<std::pair<int, double>> gs;
        while (!stack.empty()) {
            const int node = stack.back();
            stack.pop_back();
            const auto& nd = t.nodes[static_cast<std::size_t>(node)];
            if (nd.leaf || collapse_alpha[static_cast<std::size_t>(node)] < kInf) continue;
            const PruneInfo info = subtree_info(t, collapse_alpha, prev, node);
            const double r_leaf = static_cast<double>(nd.counts[0] + nd.counts[1] -
                                                      std::max(nd.counts[0], nd.counts[1])) / n;
            const double r_subtree = static_cast<double>(info.errors) / n;
            const double g = info.leaves > 1
                                 ? (r_leaf - r_subtree) / static_cast<double>(info.leaves - 1)
                                 : kInf;
            gs.emplace_back(node, g);
            min_g = std::min(min_g, g);
            stack.push_back(nd.left);
            stack.push_back(nd.right);
        }
        if (gs.empty()) break;
        const double alpha = std::max(min_g, prev);
        for (const auto& [node, g] : gs)
            if (g <= min_g + 1e-15) collapse_alpha[static_cast<std::size_t>(node)] = alpha;
        alphas.push_back(alpha);
        prev = alpha;
        if (collapse_alpha[0] < kInf) break;  // root collapsed
    }
    return alphas;
}

TreeModel prune_at(const TreeModel& t, const std::vector<double>& collapse_alpha, double alpha) {
    TreeModel out;
    out.meta = t.meta;
    struct Rec {
        const TreeModel& src;
        const std::vector<double>& ca;
        double alpha;
        TreeModel& dst;
        int depth_max = 0;

        int copy(int node, int depth) {
            depth_max = std::max(depth_max, depth);
            const auto& nd = src.nodes[static_cast<std::size_t>(node)];
            const int self = static_cast<int>(dst.nodes.size());
            dst.nodes.push_back(nd);
            if (nd.leaf || ca[static_cast<std::size_t>(node)] <= alpha) {
                auto& mine = dst.nodes[static_cast<std::size_t>(self)];
                mine.leaf = true;
                mine.left = mine.right = -1;
                mine.pred = SplitPredicate{};
                return self;
            }
            const int l = copy(nd.left, depth + 1);
            dst.nodes[static_cast<std::size_t>(self)].left = l;
            const int r = copy(nd.right, depth + 1);
            dst.nodes[static_cast<std::size_t>(self)].right = r;
            return self;
        }
    } rec{t, collapse_alpha, alpha, out};
    rec.copy(0, 0);
    out.meta.depth = rec.depth_max;
    out.meta.leaves = 0;
    for (const auto& node : out.nodes)
        if (node.leaf) ++out.meta.leaves;
    return out;
}

int route_pruned(const TreeModel& t, const std::vector<double>& collapse_alpha, double alpha,
                 const std::vector<Cell>& row) {
    int node = 0;
    for (;;) {
        const auto& nd = t.nodes[static_cast<std::size_t>(node)];
        if (nd.leaf || collapse_alpha[static_cast<std::size_t>(node)] <= alpha) return node;
        node = nd.pred.eval(row) ? nd.left : nd.right;
    }
}

// Cost-complexity alpha selection by internal cross-validation with the
// optional 1-SE rule. Falls back to alpha = 0 when folds cannot be built.
double select_alpha_by_cv(const Dataset& ds, const TrainConfig& cfg,
                          const std::vector<double>& main_alphas) {
    if (main_alphas.empty()) return 0.0;
    std::vector<double> candidates{0.0};
    for (std::size_t i = 0; i + 1 < main_alphas.size(); ++i) {
        const double gm = std::sqrt(main_alphas[i] * main_alphas[i + 1]);
        if (gm > candidates.back()) candidates.push_back(gm);
    }
    const double last = main_alphas.back();
    if (last > 0.0) candidates.push_back(last * 1.5 + 1e-12);

    FoldPlan plan;
    try {
        plan = stratified_kfold(ds, cfg.cart.prune_folds, derive_seed(cfg.seed, 0xCA27CF));
    } catch (const DataError&) {
        return 0.0;
    }

    std::vector<std::int64_t> errors(candidates.size(), 0);
    for (int f = 0; f < plan.k; ++f) {
        const Dataset train = subset_rows(ds, plan.train_indices(f));
        const auto both = class_distribution(train);
        if (both.at(Label::Placed) == 0 || both.at(Label::Unplaced) == 0) {
            // Degenerate fold: a single-class stump predicts its majority.
            const Label maj = both.at(Label::Placed) >= both.at(Label::Unplaced)
                                  ? Label::Placed
                                  : Label::Unplaced;
            for (int i : plan.test_indices(f))
                if (ds.label(i) != maj)
                    for (auto& e : errors) ++e;
            continue;
        }
        const TreeModel fold_tree =
            grow_tree(train, cfg.cart.min_leaf, 0, nullptr, "cart", cfg.seed);
        std::vector<double> fold_collapse;
        compute_collapse_alphas(fold_tree, fold_collapse);
        for (std::size_t b = 0; b < candidates.size(); ++b) {
            for (int i : plan.test_indices(f)) {
                const int leaf = route_pruned(fold_tree, fold_collapse, candidates[b], ds.row(i));
                const auto& d = fold_tree.nodes[static_cast<std::size_t>(leaf)].dist;
                const Label pred = d[0] >= d[1] ? Label::Placed : Label::Unplaced;
                if (pred != ds.label(i)) ++errors[b];
            }
        }
    }

    const double n = static_cast<double>(ds.n_rows());
    std::size_t best = 0;
    for (std::size_t b = 1; b < candidates.size(); ++b)
        if (errors[b] <= errors[best]) best = b;  // ties -> larger alpha
    if (cfg.cart.one_se_rule) {
        const double rate = static_cast<double>(errors[best]) / n;
        const double se = std::sqrt(rate * (1.0 - rate) / n);
        const double limit = rate + se;
        for (std::size_t b = candidates.size(); b-- > 0;) {
            if (static_cast<double>(errors[b]) / n <= limit) return candidates[b];
        }
    }
    return candidates[best];
}

}  // namespace

bool SplitPredicate::eval(const std::vector<Cell>& row) const {
    const Cell& cell = row[static_cast<std::size_t>(attr)];
    if (cell.missing) throw DataError("missing cell reached a split predicate");
    if (kind == Kind::NumericLe) return cell.value <= threshold;
    const int id = cell.category_id();
    return std::find(categories.begin(), categories.end(), id) != categories.end();
}

int TreeModel::route(const std::vector<Cell>& row) const {
    int node = 0;
    for (;;) {
        const auto& nd = nodes[static_cast<std::size_t>(node)];
        if (nd.leaf) return node;
        node = nd.pred.eval(row) ? nd.left : nd.right;
    }
}

std::array<double, 2> TreeModel::predict(const std::vector<Cell>& row) const {
    return nodes[static_cast<std::size_t>(route(row))].dist;
}

bool TreeModel::operator==(const TreeModel& o) const {
    if (nodes.size() != o.nodes.size()) return false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& a = nodes[i];
        const auto& b = o.nodes[i];
        if (a.leaf != b.leaf || a.left != b.left || a.right != b.right || a.counts != b.counts)
            return false;
        if (!a.leaf && (a.pred.attr != b.pred.attr || a.pred.kind != b.pred.kind ||
                        a.pred.threshold != b.pred.threshold ||
                        a.pred.categories != b.pred.categories))
            return false;
    }
    return true;
}

double gini(const std::vector<std::int64_t>& class_counts) {
    std::int64_t total = 0;
    for (std::int64_t c : class_counts) {
        if (c < 0) throw NumericError("negative class count");
        total += c;
    }
    if (total == 0) throw NumericError("gini undefined for all-zero counts");
    double sum_sq = 0.0;
    for (std::int64_t c : class_counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

TreeModel train_cart(const Dataset& ds, const TrainConfig& cfg) {
    TreeModel grown = grow_tree(ds, cfg.cart.min_leaf, 0, nullptr, "cart", cfg.seed);
    if (!cfg.cart.prune) return grown;
    std::vector<double> collapse_alpha;
    const std::vector<double> alphas = compute_collapse_alphas(grown, collapse_alpha);
    if (alphas.empty()) return grown;
    const double alpha = select_alpha_by_cv(ds, cfg, alphas);
    return prune_at(grown, collapse_alpha, alpha);
}

TreeModel train_random_tree(const Dataset& ds, const TrainConfig& cfg) {
    int k = cfg.rtree.k_attrs;
    if (k <= 0)
        k = static_cast<int>(std::floor(std::log2(static_cast<double>(ds.n_attributes())))) + 1;
    k = std::min(k, ds.n_attributes());
    Rng rng(cfg.seed);
    return grow_tree(ds, cfg.rtree.min_leaf, k, &rng, "random_tree", cfg.seed);
}

std::array<double, 2> predict_tree(const TreeModel& m, const std::vector<Cell>& row) {
    return m.predict(row);
}

}  // namespace upm
