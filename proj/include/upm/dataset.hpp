#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace upm {

enum class AttrKind { Numeric, Categorical };

/// Binary placement outcome. Exactly two classes exist system-wide.
enum class Label : int { Placed = 0, Unplaced = 1 };

constexpr int kNumClasses = 2;

const char* label_name(Label l);
/// Case-insensitive parse of "Placed"/"Unplaced". Throws DataError otherwise.
Label label_from_string(const std::string& s);

struct AttributeDescriptor {
    std::string name;
    AttrKind kind = AttrKind::Numeric;
    std::vector<std::string> categories;  // categorical only, id = position
    int index = 0;                        // 0-based column position

    bool operator==(const AttributeDescriptor&) const = default;
};

/// One table cell: a numeric value, a category id, or the missing marker.
/// Missing is a distinct state, never a sentinel value.
struct Cell {
    double value = 0.0;
    bool missing = true;

    static Cell numeric(double v) { return Cell{v, false}; }
    static Cell category(int id) { return Cell{static_cast<double>(id), false}; }
    static Cell none() { return Cell{}; }
    int category_id() const { return static_cast<int>(value); }
};

struct DatasetMeta {
    std::string name;
    std::string source;
};

/// Immutable tabular cohort: N rows of |attributes| cells plus one label per
/// row. Construction validates the shape invariants; afterwards the object is
/// safe to share across concurrent readers.
class Dataset {
public:
    Dataset() = default;
    Dataset(DatasetMeta meta, std::vector<AttributeDescriptor> attributes,
            std::vector<std::vector<Cell>> rows, std::vector<Label> labels);

    const DatasetMeta& meta() const { return meta_; }
    int n_rows() const { return static_cast<int>(rows_.size()); }
    int n_attributes() const { return static_cast<int>(attributes_.size()); }
    const std::vector<AttributeDescriptor>& attributes() const { return attributes_; }
    const AttributeDescriptor& attribute(int i) const { return attributes_[static_cast<std::size_t>(i)]; }
    const std::vector<Cell>& row(int r) const { return rows_[static_cast<std::size_t>(r)]; }
    const Cell& cell(int r, int c) const { return rows_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]; }
    Label label(int r) const { return labels_[static_cast<std::size_t>(r)]; }
    const std::vector<Label>& labels() const { return labels_; }

    bool has_missing() const;

    /// Structural + value equality (category ids compared through their
    /// string labels, so reload-induced id renumbering does not matter).
    bool same_content(const Dataset& other) const;

private:
    DatasetMeta meta_;
    std::vector<AttributeDescriptor> attributes_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<Label> labels_;
};

/// Counts per class; both keys are always present.
std::map<Label, std::int64_t> class_distribution(const Dataset& ds);

/// Row subset preserving schema and meta. Indices must be valid.
Dataset subset_rows(const Dataset& ds, const std::vector<int>& indices);

}  // namespace upm
