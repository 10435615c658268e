#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "upm/dataset.hpp"

namespace upm {

struct CleanConfig {
    enum class Impute { MedianMode, DropRow };

    double max_missing_fraction = 0.5;  // attributes above this are dropped
    Impute impute = Impute::MedianMode;
    bool drop_constant = true;
};

struct NumericScale {
    double min = 0.0;
    double max = 0.0;
};

/// Everything needed to replay cleaning + selection on fresh raw-schema data
/// with the parameters fitted at train time (no refitting).
struct TransformEntry {
    int raw_index = 0;
    std::string name;
    AttrKind kind = AttrKind::Numeric;
    double impute_numeric = 0.0;             // numeric attrs
    std::string impute_category;             // categorical attrs
    std::optional<NumericScale> scale;       // numeric attrs
    std::vector<std::string> categories;     // training category order
};

struct Transform {
    int version = 1;
    CleanConfig::Impute impute_mode = CleanConfig::Impute::MedianMode;
    std::vector<TransformEntry> kept;        // output column order
    std::vector<std::string> raw_names;      // fitted raw schema, for validation
    std::vector<AttrKind> raw_kinds;

    std::vector<AttributeDescriptor> output_schema() const;

    /// Batch semantics: replays the fitted cleaning exactly (under DropRow,
    /// rows with missing cells among kept attributes are dropped).
    Dataset apply(const Dataset& raw) const;

    /// Instance semantics: always total — missing cells are imputed with the
    /// stored values, so prediction works row by row under either mode.
    std::vector<Cell> apply_row(const Dataset& raw, int row) const;

    void validate_schema(const Dataset& raw) const;
};

/// Phase-1 cleaning: drops over-missing and constant attributes, imputes or
/// drops rows, min-max scales numerics to [0,1]. Returns the refined data
/// and the reusable transform.
std::pair<Dataset, Transform> clean(const Dataset& ds, const CleanConfig& cfg);

struct AttributeClusterSet {
    std::vector<std::vector<int>> clusters;  // partition of attribute indices
    std::vector<int> representatives;        // one per cluster (max relevance)
    std::vector<double> relevance;           // per attribute, association with label
    int k_used = 0;
};

/// Clusters attributes by association distance (1 - |correlation|, with
/// Cramer's V whenever a categorical attribute is involved) using seeded
/// k-medoids. With k absent, k maximizes mean silhouette over
/// [2, min(15, A-1)]. Requires a cleaned dataset (no missing cells).
AttributeClusterSet cluster_attributes(const Dataset& ds, std::optional<int> k,
                                       std::uint64_t seed);

/// Keeps exactly the representative attributes (dataset order preserved) and
/// composes the selection with the clean-stage transform.
std::pair<Dataset, Transform> select_and_transform(const Dataset& ds_clean,
                                                   const AttributeClusterSet& acs,
                                                   const Transform& clean_transform);

Dataset apply_transform(const Transform& t, const Dataset& raw);

/// Association of two attribute columns in [0, 1]. Exposed for tests.
double attribute_association(const Dataset& ds, int i, int j);
/// Association of an attribute with the binary label, in [0, 1].
double label_relevance(const Dataset& ds, int attr);

}  // namespace upm
