#pragma once

#include <array>
#include <cstdint>

#include "upm/dataset.hpp"

namespace upm {

/// 2x2 confusion matrix, counts[actual][predicted].
struct ConfusionMatrix {
    std::array<std::array<std::int64_t, 2>, 2> counts{{{0, 0}, {0, 0}}};

    void add(Label actual, Label predicted, std::int64_t n = 1) {
        counts[static_cast<std::size_t>(static_cast<int>(actual))]
              [static_cast<std::size_t>(static_cast<int>(predicted))] += n;
    }
    std::int64_t at(int actual, int predicted) const {
        return counts[static_cast<std::size_t>(actual)][static_cast<std::size_t>(predicted)];
    }
    std::int64_t total() const {
        return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
    }
    std::int64_t row_sum(int actual) const { return at(actual, 0) + at(actual, 1); }
    std::int64_t col_sum(int predicted) const { return at(0, predicted) + at(1, predicted); }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        for (int a = 0; a < 2; ++a)
            for (int p = 0; p < 2; ++p)
                counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)] +=
                    o.counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)];
        return *this;
    }
    bool operator==(const ConfusionMatrix&) const = default;
};

/// 100 * trace / N. Throws DataError on an empty matrix.
double accuracy_pct(const ConfusionMatrix& cm);

/// Support-weighted mean of per-class F1, as a percentage.
/// Per class: P = diag/col-sum, R = diag/row-sum, F1 = 2PR/(P+R), 0 if P+R=0.
double weighted_f1_pct(const ConfusionMatrix& cm);

/// Cohen's kappa = (p_o - p_e) / (1 - p_e); if p_e = 1, returns 1 when
/// p_o = 1 and 0 otherwise.
double cohen_kappa(const ConfusionMatrix& cm);

}  // namespace upm
