#pragma once

#include <array>
#include <cstdint>

#include "upm/dataset.hpp"
#include "upm/tree.hpp"

namespace upm {

/// Instance-based learner with entropy-motivated transformation
/// probabilities. Numeric attributes use an exponential kernel normalized
/// over the training column; categorical attributes put stop-probability
/// mass on identity and spread the rest uniformly. Per attribute and per
/// query, the scale parameter is solved so the effective instance count
/// n0 = (sum P)^2 / sum P^2 hits 1 + blend/100 * (N - 1).
struct KStarModel {
    Dataset train;       // transformed training data, no missing cells
    double blend = 20.0;  // percentage in (0, 100]
};

struct KStarDiagnostics {
    int attributes_flagged = 0;  // solver pinned at a bracket bound
};

KStarModel train_kstar(const Dataset& ds, const TrainConfig& cfg);

std::array<double, 2> kstar_predict(const KStarModel& m, const std::vector<Cell>& row,
                                    KStarDiagnostics* diag = nullptr);

}  // namespace upm
