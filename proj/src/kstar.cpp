#include "upm/kstar.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "upm/errors.hpp"

namespace upm {
namespace {

struct SolvedWeights {
    std::vector<double> w;  // unnormalized transformation probabilities
    bool flagged = false;   // solver pinned at a bracket bound
};

double effective_count(const std::vector<double>& w) {
    double s1 = 0.0, s2 = 0.0;
    for (double v : w) {
        s1 += v;
        s2 += v * v;
    }
    return s2 > 0.0 ? s1 * s1 / s2 : 0.0;
}

std::vector<double> numeric_weights(const std::vector<double>& dist_from_query, double dmin,
                                    double x0) {
    std::vector<double> w(dist_from_query.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = std::exp(-(dist_from_query[i] - dmin) / x0);
    return w;
}

// Exponential kernel scale solved so the effective instance count hits the
// blend target; monotone in x0, so plain bisection.
SolvedWeights solve_numeric(const std::vector<double>& d, double target) {
    SolvedWeights out;
    const std::size_t n = d.size();
    double dmin = d[0], dmax = d[0];
    for (double v : d) {
        dmin = std::min(dmin, v);
        dmax = std::max(dmax, v);
    }
    const double range = dmax - dmin;
    const double n_real = static_cast<double>(n);
    if (range <= 0.0 || target >= n_real * (1.0 - 1e-12)) {
        out.w.assign(n, 1.0);
        out.flagged = range <= 0.0 && target < n_real * (1.0 - 1e-9);
        return out;
    }
    double lo = range * 1e-12;
    double hi = range * 1e12;
    out.w = numeric_weights(d, dmin, lo);
    if (effective_count(out.w) > target) {
        out.flagged = true;  // duplicates at the minimum distance exceed the target
        return out;
    }
    out.w = numeric_weights(d, dmin, hi);
    while (effective_count(out.w) < target) {
        hi *= 4.0;
        if (hi > range * 1e18) {
            out.flagged = true;
            return out;
        }
        out.w = numeric_weights(d, dmin, hi);
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        out.w = numeric_weights(d, dmin, mid);
        const double n0 = effective_count(out.w);
        if (std::fabs(n0 - target) <= 1e-9) return out;
        if (n0 < target)
            lo = mid;
        else
            hi = mid;
    }
    out.w = numeric_weights(d, dmin, 0.5 * (lo + hi));
    out.flagged = std::fabs(effective_count(out.w) - target) > 1e-6;
    return out;
}

// Stop-probability solve for a categorical attribute: matches get s, every
// other category shares 1 - s; n0 falls from N (uniform) to the match count.
SolvedWeights solve_categorical(const std::vector<char>& match, int n_categories, double target) {
    SolvedWeights out;
    const std::size_t n = match.size();
    const double n_real = static_cast<double>(n);
    std::size_t m = 0;
    for (char c : match) m += static_cast<std::size_t>(c);

    const auto fill = [&](double s) {
        const double other = n_categories > 1 ? (1.0 - s) / (n_categories - 1) : 0.0;
        out.w.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.w[i] = match[i] ? s : other;
    };

    if (n_categories < 2 || target >= n_real * (1.0 - 1e-12) || m == 0 || m == n) {
        out.w.assign(n, 1.0);
        out.flagged = (m == 0 || m == n || n_categories < 2) && target < n_real * (1.0 - 1e-9);
        return out;
    }
    const double s_uniform = 1.0 / n_categories;
    if (static_cast<double>(m) > target) {
        fill(1.0 - 1e-12);
        out.flagged = true;
        return out;
    }
    double lo = s_uniform;       // n0 = N
    double hi = 1.0 - 1e-12;     // n0 -> m
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        fill(mid);
        const double n0 = effective_count(out.w);
        if (std::fabs(n0 - target) <= 1e-9) return out;
        if (n0 > target)
            lo = mid;
        else
            hi = mid;
    }
    fill(0.5 * (lo + hi));
    out.flagged = std::fabs(effective_count(out.w) - target) > 1e-6;
    return out;
}

}  // namespace

KStarModel train_kstar(const Dataset& ds, const TrainConfig& cfg) {
    if (cfg.kstar.blend <= 0.0 || cfg.kstar.blend > 100.0)
        throw ConfigError("K-Star blend must be in (0, 100]");
    if (ds.has_missing())
        throw DataError("K-Star training requires a dataset with no missing cells");
    return KStarModel{ds, cfg.kstar.blend};
}

std::array<double, 2> kstar_predict(const KStarModel& m, const std::vector<Cell>& row,
                                    KStarDiagnostics* diag) {
    const Dataset& train = m.train;
    const int n = train.n_rows();
    const int a = train.n_attributes();
    if (static_cast<int>(row.size()) != a)
        throw DataError("query instance has " + std::to_string(row.size()) +
                        " cells, model schema has " + std::to_string(a));
    const double target = 1.0 + (m.blend / 100.0) * (static_cast<double>(n) - 1.0);

    // Per-instance transformation scores; attribute probabilities multiply.
    // Each attribute's weights are scaled to mean 1 (a per-attribute constant
    // that cancels in the final normalization) to keep products well ranged.
    std::vector<double> score(static_cast<std::size_t>(n), 1.0);
    int flagged = 0;
    for (int c = 0; c < a; ++c) {
        const Cell& q = row[static_cast<std::size_t>(c)];
        if (q.missing) throw DataError("missing cell in K-Star query");
        SolvedWeights solved;
        if (train.attribute(c).kind == AttrKind::Numeric) {
            std::vector<double> d(static_cast<std::size_t>(n));
            for (int r = 0; r < n; ++r)
                d[static_cast<std::size_t>(r)] = std::fabs(train.cell(r, c).value - q.value);
            solved = solve_numeric(d, target);
        } else {
            std::vector<char> match(static_cast<std::size_t>(n), 0);
            for (int r = 0; r < n; ++r)
                match[static_cast<std::size_t>(r)] =
                    train.cell(r, c).category_id() == q.category_id() ? 1 : 0;
            solved = solve_categorical(
                match, static_cast<int>(train.attribute(c).categories.size()), target);
        }
        if (solved.flagged) ++flagged;
        double s1 = 0.0;
        for (double w : solved.w) s1 += w;
        const double scale = static_cast<double>(n) / s1;
        for (int r = 0; r < n; ++r)
            score[static_cast<std::size_t>(r)] *= solved.w[static_cast<std::size_t>(r)] * scale;
    }
    if (diag) diag->attributes_flagged = flagged;

    std::array<double, 2> class_score{0.0, 0.0};
    for (int r = 0; r < n; ++r)
        class_score[static_cast<std::size_t>(static_cast<int>(train.label(r)))] +=
            score[static_cast<std::size_t>(r)];
    const double total = class_score[0] + class_score[1];
    if (!(total > 0.0) || !std::isfinite(total)) {
        // Degenerate underflow: fall back to the training priors.
        const auto dist = class_distribution(train);
        const double pn = static_cast<double>(n);
        return {static_cast<double>(dist.at(Label::Placed)) / pn,
                static_cast<double>(dist.at(Label::Unplaced)) / pn};
    }
    return {class_score[0] / total, class_score[1] / total};
}

}  // namespace upm
