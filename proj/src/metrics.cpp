#include "upm/metrics.hpp"

#include "upm/errors.hpp"

namespace upm {

namespace {
void require_nonempty(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw DataError("confusion matrix is empty");
}
}  // namespace

double accuracy_pct(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    const double trace = static_cast<double>(cm.at(0, 0) + cm.at(1, 1));
    return 100.0 * trace / static_cast<double>(cm.total());
}

double weighted_f1_pct(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    const double n = static_cast<double>(cm.total());
    double weighted = 0.0;
    for (int c = 0; c < 2; ++c) {
        const double tp = static_cast<double>(cm.at(c, c));
        const double col = static_cast<double>(cm.col_sum(c));
        const double row = static_cast<double>(cm.row_sum(c));
        const double precision = col > 0 ? tp / col : 0.0;
        const double recall = row > 0 ? tp / row : 0.0;
        const double f1 = (precision + recall) > 0
                              ? 2.0 * precision * recall / (precision + recall)
                              : 0.0;
        weighted += (row / n) * f1;
    }
    return 100.0 * weighted;
}

double cohen_kappa(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    const double n = static_cast<double>(cm.total());
    const double po = static_cast<double>(cm.at(0, 0) + cm.at(1, 1)) / n;
    const double pe = (static_cast<double>(cm.row_sum(0)) * static_cast<double>(cm.col_sum(0)) +
                       static_cast<double>(cm.row_sum(1)) * static_cast<double>(cm.col_sum(1))) /
                      (n * n);
    if (pe >= 1.0) return po >= 1.0 ? 1.0 : 0.0;
    return (po - pe) / (1.0 - pe);
}

}  // namespace upm
