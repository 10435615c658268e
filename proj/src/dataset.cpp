#include "upm/dataset.hpp"

#include <cctype>
#include <cmath>

#include "upm/errors.hpp"

namespace upm {

const char* label_name(Label l) {
    return l == Label::Placed ? "Placed" : "Unplaced";
}

Label label_from_string(const std::string& s) {
    std::string low;
    low.reserve(s.size());
    for (char c : s) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (low == "placed") return Label::Placed;
    if (low == "unplaced") return Label::Unplaced;
    throw DataError("unknown label value \"" + s + "\" (expected Placed or Unplaced)");
}

Dataset::Dataset(DatasetMeta meta, std::vector<AttributeDescriptor> attributes,
                 std::vector<std::vector<Cell>> rows, std::vector<Label> labels)
    : meta_(std::move(meta)),
      attributes_(std::move(attributes)),
      rows_(std::move(rows)),
      labels_(std::move(labels)) {
    if (rows_.empty()) throw DataError("dataset has zero rows");
    if (rows_.size() != labels_.size())
        throw DataError("dataset has " + std::to_string(rows_.size()) + " rows but " +
                        std::to_string(labels_.size()) + " labels");
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        const auto& a = attributes_[i];
        if (a.index != static_cast<int>(i))
            throw DataError("attribute \"" + a.name + "\" has index " + std::to_string(a.index) +
                            ", expected " + std::to_string(i));
        if (a.kind == AttrKind::Categorical && a.categories.empty())
            throw DataError("categorical attribute \"" + a.name + "\" lists no categories");
        for (std::size_t j = 0; j < i; ++j)
            if (attributes_[j].name == a.name)
                throw DataError("duplicate attribute name \"" + a.name + "\"");
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r].size() != attributes_.size())
            throw DataError("row " + std::to_string(r) + ": expected " +
                            std::to_string(attributes_.size()) + " cells, got " +
                            std::to_string(rows_[r].size()));
        for (std::size_t c = 0; c < attributes_.size(); ++c) {
            const Cell& cell = rows_[r][c];
            if (cell.missing) continue;
            const auto& a = attributes_[c];
            if (a.kind == AttrKind::Categorical) {
                const int id = cell.category_id();
                if (id < 0 || id >= static_cast<int>(a.categories.size()))
                    throw DataError("row " + std::to_string(r) + ": category id " +
                                    std::to_string(id) + " out of range for attribute \"" +
                                    a.name + "\"");
            } else if (!std::isfinite(cell.value)) {
                throw DataError("row " + std::to_string(r) + ": non-finite value in attribute \"" +
                                a.name + "\"");
            }
        }
    }
}

bool Dataset::has_missing() const {
    for (const auto& row : rows_)
        for (const auto& cell : row)
            if (cell.missing) return true;
    return false;
}

bool Dataset::same_content(const Dataset& other) const {
    if (n_rows() != other.n_rows() || n_attributes() != other.n_attributes()) return false;
    for (int c = 0; c < n_attributes(); ++c) {
        const auto& a = attribute(c);
        const auto& b = other.attribute(c);
        if (a.name != b.name || a.kind != b.kind) return false;
    }
    if (labels_ != other.labels_) return false;
    for (int r = 0; r < n_rows(); ++r) {
        for (int c = 0; c < n_attributes(); ++c) {
            const Cell& x = cell(r, c);
            const Cell& y = other.cell(r, c);
            if (x.missing != y.missing) return false;
            if (x.missing) continue;
            if (attribute(c).kind == AttrKind::Numeric) {
                if (x.value != y.value) return false;
            } else {
                const auto& xs = attribute(c).categories[static_cast<std::size_t>(x.category_id())];
                const auto& ys = other.attribute(c).categories[static_cast<std::size_t>(y.category_id())];
                if (xs != ys) return false;
            }
        }
    }
    return true;
}

std::map<Label, std::int64_t> class_distribution(const Dataset& ds) {
    std::map<Label, std::int64_t> out{{Label::Placed, 0}, {Label::Unplaced, 0}};
    for (Label l : ds.labels()) ++out[l];
    return out;
}

Dataset subset_rows(const Dataset& ds, const std::vector<int>& indices) {
    std::vector<std::vector<Cell>> rows;
    std::vector<Label> labels;
    rows.reserve(indices.size());
    labels.reserve(indices.size());
    for (int i : indices) {
        rows.push_back(ds.row(i));
        labels.push_back(ds.label(i));
    }
    return Dataset(ds.meta(), ds.attributes(), std::move(rows), std::move(labels));
}

}  // namespace upm
