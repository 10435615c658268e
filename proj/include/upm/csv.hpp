#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "upm/dataset.hpp"

namespace upm {

/// CSV ingestion contract: first row is the header, "?" or an empty cell is
/// the missing marker, the label column holds Placed/Unplaced.
struct CsvSchema {
    std::string label_column = "placement_status";
    /// Explicit kinds by attribute name; anything absent is inferred
    /// (numeric iff every non-missing cell parses as a number).
    std::map<std::string, AttrKind> type_hints;
};

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Inverse of load_csv: reloading the written file yields a dataset with
/// identical content (values, labels, missing markers).
void save_csv(const Dataset& ds, const std::filesystem::path& path,
              const std::string& label_column = "placement_status");

/// Round-trip-exact decimal rendering of a double.
std::string format_double(double v);

}  // namespace upm
