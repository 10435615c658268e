#include "upm/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "upm/errors.hpp"
#include "upm/rng.hpp"

namespace upm {
namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int mode_of(const std::vector<int>& ids, int n_categories) {
    std::vector<int> counts(static_cast<std::size_t>(n_categories), 0);
    for (int id : ids) ++counts[static_cast<std::size_t>(id)];
    int best = 0;
    for (int c = 1; c < n_categories; ++c)
        if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(best)]) best = c;
    return best;
}

// Pearson correlation magnitude; 0 when either column is constant.
double pearson_abs(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    const double r = sxy / std::sqrt(sxx * syy);
    return std::min(1.0, std::fabs(r));
}

// Cramer's V over a contingency table; empty rows/columns are excluded from
// the degrees-of-freedom term.
double cramers_v(const std::vector<std::vector<double>>& table) {
    const std::size_t rows = table.size();
    const std::size_t cols = rows ? table[0].size() : 0;
    std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
    double n = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            row_sum[r] += table[r][c];
            col_sum[c] += table[r][c];
            n += table[r][c];
        }
    if (n <= 0.0) return 0.0;
    int live_rows = 0, live_cols = 0;
    for (double s : row_sum)
        if (s > 0.0) ++live_rows;
    for (double s : col_sum)
        if (s > 0.0) ++live_cols;
    const int dof = std::min(live_rows, live_cols) - 1;
    if (dof < 1) return 0.0;
    double chi2 = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        if (row_sum[r] <= 0.0) continue;
        for (std::size_t c = 0; c < cols; ++c) {
            if (col_sum[c] <= 0.0) continue;
            const double expected = row_sum[r] * col_sum[c] / n;
            const double d = table[r][c] - expected;
            chi2 += d * d / expected;
        }
    }
    return std::min(1.0, std::sqrt(chi2 / (n * static_cast<double>(dof))));
}

constexpr int kNumericBins = 8;

std::vector<int> bin_numeric(const std::vector<double>& x) {
    double lo = x[0], hi = x[0];
    for (double v : x) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<int> bins(x.size(), 0);
    if (hi > lo) {
        const double width = (hi - lo) / kNumericBins;
        for (std::size_t i = 0; i < x.size(); ++i)
            bins[i] = std::min(kNumericBins - 1, static_cast<int>((x[i] - lo) / width));
    }
    return bins;
}

double cramers_v_ids(const std::vector<int>& a, int ca, const std::vector<int>& b, int cb) {
    std::vector<std::vector<double>> table(static_cast<std::size_t>(ca),
                                           std::vector<double>(static_cast<std::size_t>(cb), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        table[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])] += 1.0;
    return cramers_v(table);
}

std::vector<double> numeric_column(const Dataset& ds, int attr) {
    std::vector<double> out(static_cast<std::size_t>(ds.n_rows()));
    for (int r = 0; r < ds.n_rows(); ++r) out[static_cast<std::size_t>(r)] = ds.cell(r, attr).value;
    return out;
}

std::vector<int> category_column(const Dataset& ds, int attr) {
    std::vector<int> out(static_cast<std::size_t>(ds.n_rows()));
    for (int r = 0; r < ds.n_rows(); ++r)
        out[static_cast<std::size_t>(r)] = ds.cell(r, attr).category_id();
    return out;
}

void require_no_missing(const Dataset& ds, const char* who) {
    if (ds.has_missing())
        throw DataError(std::string(who) + " requires a cleaned dataset with no missing cells");
}

struct KMedoidsResult {
    std::vector<int> medoids;
    std::vector<int> assign;
};

// Seeded k-medoids: random first medoid, maxmin completion, then alternate
// nearest-medoid assignment and in-cluster medoid updates to a fixed point.
KMedoidsResult k_medoids(const std::vector<std::vector<double>>& dist, int k, Rng& rng) {
    const int n = static_cast<int>(dist.size());
    KMedoidsResult res;
    res.medoids.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n))));
    while (static_cast<int>(res.medoids.size()) < k) {
        int best = -1;
        double best_d = -1.0;
        for (int i = 0; i < n; ++i) {
            if (std::find(res.medoids.begin(), res.medoids.end(), i) != res.medoids.end())
                continue;
            double nearest = 2.0;
            for (int m : res.medoids) nearest = std::min(nearest, dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)]);
            if (nearest > best_d) {
                best_d = nearest;
                best = i;
            }
        }
        res.medoids.push_back(best);
    }
    std::sort(res.medoids.begin(), res.medoids.end());

    res.assign.assign(static_cast<std::size_t>(n), 0);
    for (int iter = 0; iter < 100; ++iter) {
        for (int i = 0; i < n; ++i) {
            int best_c = 0;
            double best_d = dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(res.medoids[0])];
            for (int c = 1; c < k; ++c) {
                const double d = dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(res.medoids[static_cast<std::size_t>(c)])];
                if (d < best_d) {
                    best_d = d;
                    best_c = c;
                }
            }
            res.assign[static_cast<std::size_t>(i)] = best_c;
        }
        bool changed = false;
        for (int c = 0; c < k; ++c) {
            int best = res.medoids[static_cast<std::size_t>(c)];
            double best_cost = -1.0;
            for (int i = 0; i < n; ++i) {
                if (res.assign[static_cast<std::size_t>(i)] != c) continue;
                double cost = 0.0;
                for (int j = 0; j < n; ++j)
                    if (res.assign[static_cast<std::size_t>(j)] == c)
                        cost += dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (best_cost < 0.0 || cost < best_cost ||
                    (cost == best_cost && i < best)) {
                    best_cost = cost;
                    best = i;
                }
            }
            if (best != res.medoids[static_cast<std::size_t>(c)]) {
                res.medoids[static_cast<std::size_t>(c)] = best;
                changed = true;
            }
        }
        if (!changed) break;
    }
    // Final assignment against the settled medoids.
    for (int i = 0; i < n; ++i) {
        int best_c = 0;
        double best_d = dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(res.medoids[0])];
        for (int c = 1; c < k; ++c) {
            const double d = dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(res.medoids[static_cast<std::size_t>(c)])];
            if (d < best_d) {
                best_d = d;
                best_c = c;
            }
        }
        res.assign[static_cast<std::size_t>(i)] = best_c;
    }
    for (int c = 0; c < k; ++c)
        res.assign[static_cast<std::size_t>(res.medoids[static_cast<std::size_t>(c)])] = c;
    return res;
}

double mean_silhouette(const std::vector<std::vector<double>>& dist,
                       const std::vector<int>& assign, int k) {
    const int n = static_cast<int>(dist.size());
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int a : assign) ++sizes[static_cast<std::size_t>(a)];
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<double> sum_to(static_cast<std::size_t>(k), 0.0);
        for (int j = 0; j < n; ++j)
            sum_to[static_cast<std::size_t>(assign[static_cast<std::size_t>(j)])] +=
                dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const int own = assign[static_cast<std::size_t>(i)];
        if (sizes[static_cast<std::size_t>(own)] <= 1) continue;  // singleton: s = 0
        const double a = sum_to[static_cast<std::size_t>(own)] /
                         static_cast<double>(sizes[static_cast<std::size_t>(own)] - 1);
        double b = 2.0;
        for (int c = 0; c < k; ++c) {
            if (c == own || sizes[static_cast<std::size_t>(c)] == 0) continue;
            b = std::min(b, sum_to[static_cast<std::size_t>(c)] /
                                static_cast<double>(sizes[static_cast<std::size_t>(c)]));
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

}  // namespace

std::pair<Dataset, Transform> clean(const Dataset& ds, const CleanConfig& cfg) {
    if (cfg.max_missing_fraction < 0.0 || cfg.max_missing_fraction > 1.0)
        throw ConfigError("max_missing_fraction must be in [0,1]");
    const int n = ds.n_rows();
    const int a = ds.n_attributes();

    // 1. Drop attributes with too much missingness (all-missing always goes:
    //    there is nothing to impute from).
    std::vector<int> stage1;
    for (int c = 0; c < a; ++c) {
        int miss = 0;
        for (int r = 0; r < n; ++r)
            if (ds.cell(r, c).missing) ++miss;
        if (miss == n) continue;
        const double frac = static_cast<double>(miss) / static_cast<double>(n);
        if (frac > cfg.max_missing_fraction) continue;
        stage1.push_back(c);
    }
    if (stage1.empty()) throw DataError("cleaning dropped every attribute");

    // 2. Row filter (DropRow) over the surviving attributes.
    std::vector<int> rows;
    for (int r = 0; r < n; ++r) {
        if (cfg.impute == CleanConfig::Impute::DropRow) {
            bool any_missing = false;
            for (int c : stage1)
                if (ds.cell(r, c).missing) {
                    any_missing = true;
                    break;
                }
            if (any_missing) continue;
        }
        rows.push_back(r);
    }
    if (rows.empty()) throw DataError("row dropping removed every instance");

    // 3. Imputation values from the surviving rows (stored under both modes
    //    so that single-instance application stays total).
    struct Column {
        int raw = 0;
        std::vector<double> values;  // numeric post-imputation
        std::vector<int> ids;        // categorical post-imputation
        double impute_numeric = 0.0;
        int impute_category = 0;
    };
    std::vector<Column> cols;
    for (int c : stage1) {
        Column col;
        col.raw = c;
        const bool numeric = ds.attribute(c).kind == AttrKind::Numeric;
        if (numeric) {
            std::vector<double> present;
            for (int r : rows)
                if (!ds.cell(r, c).missing) present.push_back(ds.cell(r, c).value);
            if (present.empty()) continue;  // all-missing within surviving rows
            col.impute_numeric = median_of(present);
            for (int r : rows) {
                const Cell& cell = ds.cell(r, c);
                col.values.push_back(cell.missing ? col.impute_numeric : cell.value);
            }
        } else {
            std::vector<int> present;
            for (int r : rows)
                if (!ds.cell(r, c).missing) present.push_back(ds.cell(r, c).category_id());
            if (present.empty()) continue;
            col.impute_category =
                mode_of(present, static_cast<int>(ds.attribute(c).categories.size()));
            for (int r : rows) {
                const Cell& cell = ds.cell(r, c);
                col.ids.push_back(cell.missing ? col.impute_category : cell.category_id());
            }
        }
        cols.push_back(std::move(col));
    }

    // 4. Constant-attribute drop on the post-imputation columns.
    if (cfg.drop_constant) {
        std::vector<Column> kept;
        for (auto& col : cols) {
            bool constant = true;
            if (!col.values.empty()) {
                for (double v : col.values)
                    if (v != col.values[0]) {
                        constant = false;
                        break;
                    }
            } else {
                for (int id : col.ids)
                    if (id != col.ids[0]) {
                        constant = false;
                        break;
                    }
            }
            if (!constant) kept.push_back(std::move(col));
        }
        cols = std::move(kept);
    }
    if (cols.empty()) throw DataError("cleaning dropped every attribute");

    // 5. Min-max scale numerics and assemble transform + output dataset.
    Transform t;
    t.impute_mode = cfg.impute;
    for (int c = 0; c < a; ++c) {
        t.raw_names.push_back(ds.attribute(c).name);
        t.raw_kinds.push_back(ds.attribute(c).kind);
    }
    std::vector<AttributeDescriptor> out_attrs;
    for (auto& col : cols) {
        const auto& src = ds.attribute(col.raw);
        TransformEntry e;
        e.raw_index = col.raw;
        e.name = src.name;
        e.kind = src.kind;
        if (src.kind == AttrKind::Numeric) {
            double lo = col.values[0], hi = col.values[0];
            for (double v : col.values) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            e.scale = NumericScale{lo, hi};
            e.impute_numeric = col.impute_numeric;
        } else {
            e.categories = src.categories;
            e.impute_category = src.categories[static_cast<std::size_t>(col.impute_category)];
        }
        AttributeDescriptor d = src;
        d.index = static_cast<int>(out_attrs.size());
        out_attrs.push_back(std::move(d));
        t.kept.push_back(std::move(e));
    }

    std::vector<std::vector<Cell>> out_rows(rows.size());
    for (std::size_t ri = 0; ri < rows.size(); ++ri) out_rows[ri].reserve(cols.size());
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
        const auto& col = cols[ci];
        const auto& entry = t.kept[ci];
        for (std::size_t ri = 0; ri < rows.size(); ++ri) {
            if (!col.values.empty()) {
                const auto& sc = *entry.scale;
                const double denom = sc.max - sc.min;
                const double v = denom > 0.0 ? (col.values[ri] - sc.min) / denom : 0.0;
                out_rows[ri].push_back(Cell::numeric(v));
            } else {
                out_rows[ri].push_back(Cell::category(col.ids[ri]));
            }
        }
    }
    std::vector<Label> out_labels;
    out_labels.reserve(rows.size());
    for (int r : rows) out_labels.push_back(ds.label(r));

    Dataset out(ds.meta(), std::move(out_attrs), std::move(out_rows), std::move(out_labels));
    return {std::move(out), std::move(t)};
}

std::vector<AttributeDescriptor> Transform::output_schema() const {
    std::vector<AttributeDescriptor> attrs;
    for (const auto& e : kept) {
        AttributeDescriptor d;
        d.name = e.name;
        d.kind = e.kind;
        d.categories = e.categories;
        d.index = static_cast<int>(attrs.size());
        attrs.push_back(std::move(d));
    }
    return attrs;
}

void Transform::validate_schema(const Dataset& raw) const {
    if (raw.n_attributes() != static_cast<int>(raw_names.size()))
        throw DataError("schema mismatch: transform was fitted on " +
                        std::to_string(raw_names.size()) + " attributes, got " +
                        std::to_string(raw.n_attributes()));
    for (int c = 0; c < raw.n_attributes(); ++c) {
        if (raw.attribute(c).name != raw_names[static_cast<std::size_t>(c)] ||
            raw.attribute(c).kind != raw_kinds[static_cast<std::size_t>(c)])
            throw DataError("schema mismatch at attribute " + std::to_string(c) + " (\"" +
                            raw.attribute(c).name + "\")");
    }
}

std::vector<Cell> Transform::apply_row(const Dataset& raw, int row) const {
    std::vector<Cell> out;
    out.reserve(kept.size());
    for (const auto& e : kept) {
        const Cell& cell = raw.cell(row, e.raw_index);
        if (e.kind == AttrKind::Numeric) {
            const double v = cell.missing ? e.impute_numeric : cell.value;
            const auto& sc = *e.scale;
            const double denom = sc.max - sc.min;
            double scaled = denom > 0.0 ? (v - sc.min) / denom : 0.0;
            scaled = std::clamp(scaled, 0.0, 1.0);
            out.push_back(Cell::numeric(scaled));
        } else {
            int id = -1;
            if (!cell.missing) {
                const auto& incoming =
                    raw.attribute(e.raw_index).categories[static_cast<std::size_t>(cell.category_id())];
                for (std::size_t i = 0; i < e.categories.size(); ++i)
                    if (e.categories[i] == incoming) {
                        id = static_cast<int>(i);
                        break;
                    }
            }
            if (id < 0) {
                // Missing or a category unseen at fit time: stored mode.
                for (std::size_t i = 0; i < e.categories.size(); ++i)
                    if (e.categories[i] == e.impute_category) id = static_cast<int>(i);
            }
            out.push_back(Cell::category(id));
        }
    }
    return out;
}

Dataset Transform::apply(const Dataset& raw) const {
    validate_schema(raw);
    std::vector<std::vector<Cell>> rows;
    std::vector<Label> labels;
    for (int r = 0; r < raw.n_rows(); ++r) {
        if (impute_mode == CleanConfig::Impute::DropRow) {
            bool any_missing = false;
            for (const auto& e : kept)
                if (raw.cell(r, e.raw_index).missing) {
                    any_missing = true;
                    break;
                }
            if (any_missing) continue;
        }
        rows.push_back(apply_row(raw, r));
        labels.push_back(raw.label(r));
    }
    if (rows.empty()) throw DataError("transform dropped every instance");
    return Dataset(raw.meta(), output_schema(), std::move(rows), std::move(labels));
}

Dataset apply_transform(const Transform& t, const Dataset& raw) { return t.apply(raw); }

double attribute_association(const Dataset& ds, int i, int j) {
    const bool ni = ds.attribute(i).kind == AttrKind::Numeric;
    const bool nj = ds.attribute(j).kind == AttrKind::Numeric;
    if (ni && nj) return pearson_abs(numeric_column(ds, i), numeric_column(ds, j));
    const auto ids_of = [&](int attr, int& count) {
        if (ds.attribute(attr).kind == AttrKind::Numeric) {
            count = kNumericBins;
            return bin_numeric(numeric_column(ds, attr));
        }
        count = static_cast<int>(ds.attribute(attr).categories.size());
        return category_column(ds, attr);
    };
    int ci = 0, cj = 0;
    const auto a = ids_of(i, ci);
    const auto b = ids_of(j, cj);
    return cramers_v_ids(a, ci, b, cj);
}

double label_relevance(const Dataset& ds, int attr) {
    std::vector<int> label01(static_cast<std::size_t>(ds.n_rows()));
    for (int r = 0; r < ds.n_rows(); ++r)
        label01[static_cast<std::size_t>(r)] = static_cast<int>(ds.label(r));
    if (ds.attribute(attr).kind == AttrKind::Numeric) {
        // Point-biserial = Pearson against the 0/1 label.
        std::vector<double> y(label01.begin(), label01.end());
        return pearson_abs(numeric_column(ds, attr), y);
    }
    return cramers_v_ids(category_column(ds, attr),
                         static_cast<int>(ds.attribute(attr).categories.size()), label01, 2);
}

AttributeClusterSet cluster_attributes(const Dataset& ds, std::optional<int> k,
                                       std::uint64_t seed) {
    require_no_missing(ds, "cluster_attributes");
    const int a = ds.n_attributes();
    if (a < 2) throw DataError("attribute clustering requires at least 2 attributes");
    if (k && (*k < 1 || *k > a))
        throw DataError("cluster count " + std::to_string(*k) + " outside [1, " +
                        std::to_string(a) + "]");

    std::vector<std::vector<double>> dist(static_cast<std::size_t>(a),
                                          std::vector<double>(static_cast<std::size_t>(a), 0.0));
    for (int i = 0; i < a; ++i)
        for (int j = i + 1; j < a; ++j) {
            const double d = std::clamp(1.0 - attribute_association(ds, i, j), 0.0, 1.0);
            dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = d;
            dist[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = d;
        }

    AttributeClusterSet out;
    out.relevance.resize(static_cast<std::size_t>(a));
    for (int i = 0; i < a; ++i) out.relevance[static_cast<std::size_t>(i)] = label_relevance(ds, i);

    std::vector<int> assign;
    int k_used = 0;
    if (k) {
        k_used = *k;
        if (k_used == a) {
            assign.resize(static_cast<std::size_t>(a));
            for (int i = 0; i < a; ++i) assign[static_cast<std::size_t>(i)] = i;
        } else {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k_used)));
            assign = k_medoids(dist, k_used, rng).assign;
        }
    } else {
        const int k_max = std::min(15, a - 1);
        double best_sil = -2.0;
        for (int kk = 2; kk <= k_max; ++kk) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(kk)));
            const auto res = k_medoids(dist, kk, rng);
            const double sil = mean_silhouette(dist, res.assign, kk);
            if (sil > best_sil) {
                best_sil = sil;
                k_used = kk;
                assign = res.assign;
            }
        }
    }

    out.k_used = k_used;
    out.clusters.assign(static_cast<std::size_t>(k_used), {});
    for (int i = 0; i < a; ++i)
        out.clusters[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])].push_back(i);
    for (auto& cluster : out.clusters) {
        int rep = cluster[0];
        for (int m : cluster)
            if (out.relevance[static_cast<std::size_t>(m)] >
                out.relevance[static_cast<std::size_t>(rep)])
                rep = m;
        out.representatives.push_back(rep);
    }
    return out;
}

std::pair<Dataset, Transform> select_and_transform(const Dataset& ds_clean,
                                                   const AttributeClusterSet& acs,
                                                   const Transform& clean_transform) {
    const int a = ds_clean.n_attributes();
    if (static_cast<int>(clean_transform.kept.size()) != a)
        throw DataError("clean transform does not match the cleaned dataset schema");
    std::size_t covered = 0;
    for (const auto& cluster : acs.clusters) {
        covered += cluster.size();
        for (int m : cluster)
            if (m < 0 || m >= a) throw DataError("cluster set refers to unknown attribute index");
    }
    if (covered != static_cast<std::size_t>(a))
        throw DataError("cluster set does not partition the attribute indices");

    std::vector<int> kept(acs.representatives);
    std::sort(kept.begin(), kept.end());

    Transform t;
    t.version = clean_transform.version;
    t.impute_mode = clean_transform.impute_mode;
    t.raw_names = clean_transform.raw_names;
    t.raw_kinds = clean_transform.raw_kinds;
    for (int idx : kept) t.kept.push_back(clean_transform.kept[static_cast<std::size_t>(idx)]);

    std::vector<AttributeDescriptor> out_attrs;
    for (int idx : kept) {
        AttributeDescriptor d = ds_clean.attribute(idx);
        d.index = static_cast<int>(out_attrs.size());
        out_attrs.push_back(std::move(d));
    }
    std::vector<std::vector<Cell>> rows(static_cast<std::size_t>(ds_clean.n_rows()));
    for (int r = 0; r < ds_clean.n_rows(); ++r) {
        rows[static_cast<std::size_t>(r)].reserve(kept.size());
        for (int idx : kept) rows[static_cast<std::size_t>(r)].push_back(ds_clean.cell(r, idx));
    }
    Dataset out(ds_clean.meta(), std::move(out_attrs), std::move(rows),
                std::vector<Label>(ds_clean.labels()));
    return {std::move(out), std::move(t)};
}

}  // namespace upm
