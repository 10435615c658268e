#include "upm/csv.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "upm/errors.hpp"

namespace upm {
namespace {

// Splits one physical line into fields. Supports RFC-4180 quoting within a
// line ("" escapes a quote); embedded newlines are not supported.
std::vector<std::string> split_csv_line(const std::string& line, int file_row, int expected) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted)
        throw DataError("row " + std::to_string(file_row) + ": unterminated quoted field");
    fields.push_back(std::move(cur));
    if (expected > 0 && static_cast<int>(fields.size()) != expected)
        throw DataError("row " + std::to_string(file_row) + ": expected " +
                        std::to_string(expected) + " cells, got " +
                        std::to_string(fields.size()));
    return fields;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size();
}

bool is_missing_token(const std::string& s) { return s.empty() || s == "?"; }

bool needs_quoting(const std::string& s) {
    if (s.empty()) return false;
    if (s.front() == ' ' || s.back() == ' ') return true;
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quote_field(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (lines.empty()) throw DataError("empty file: " + path.string());

    const auto header = split_csv_line(lines[0], 1, 0);
    const int n_cols = static_cast<int>(header.size());
    int label_col = -1;
    for (int c = 0; c < n_cols; ++c)
        if (header[static_cast<std::size_t>(c)] == schema.label_column) label_col = c;
    if (label_col < 0)
        throw DataError("label column \"" + schema.label_column + "\" not found in " +
                        path.string());

    std::vector<std::vector<std::string>> raw;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        if (lines[r].empty() && r + 1 == lines.size()) break;  // trailing newline
        raw.push_back(split_csv_line(lines[r], static_cast<int>(r) + 1, n_cols));
    }
    if (raw.empty()) throw DataError("no data rows in " + path.string());

    // Kind inference per non-label column: numeric iff all non-missing parse.
    std::vector<AttrKind> kinds(static_cast<std::size_t>(n_cols), AttrKind::Numeric);
    for (int c = 0; c < n_cols; ++c) {
        if (c == label_col) continue;
        const auto hint = schema.type_hints.find(header[static_cast<std::size_t>(c)]);
        if (hint != schema.type_hints.end()) {
            kinds[static_cast<std::size_t>(c)] = hint->second;
            continue;
        }
        for (const auto& row : raw) {
            const std::string& tok = row[static_cast<std::size_t>(c)];
            double v;
            if (!is_missing_token(tok) && !parse_number(tok, v)) {
                kinds[static_cast<std::size_t>(c)] = AttrKind::Categorical;
                break;
            }
        }
    }

    std::vector<AttributeDescriptor> attrs;
    std::vector<std::map<std::string, int>> cat_ids(static_cast<std::size_t>(n_cols));
    for (int c = 0; c < n_cols; ++c) {
        if (c == label_col) continue;
        AttributeDescriptor d;
        d.name = header[static_cast<std::size_t>(c)];
        d.kind = kinds[static_cast<std::size_t>(c)];
        d.index = static_cast<int>(attrs.size());
        attrs.push_back(std::move(d));
    }

    std::vector<std::vector<Cell>> rows;
    std::vector<Label> labels;
    rows.reserve(raw.size());
    for (const auto& fields : raw) {
        std::vector<Cell> cells;
        cells.reserve(static_cast<std::size_t>(n_cols - 1));
        int out_c = 0;
        for (int c = 0; c < n_cols; ++c) {
            if (c == label_col) continue;
            const std::string& tok = fields[static_cast<std::size_t>(c)];
            if (is_missing_token(tok)) {
                cells.push_back(Cell::none());
            } else if (kinds[static_cast<std::size_t>(c)] == AttrKind::Numeric) {
                double v;
                if (!parse_number(tok, v))
                    throw DataError("column \"" + header[static_cast<std::size_t>(c)] +
                                    "\": cell \"" + tok + "\" is not numeric");
                cells.push_back(Cell::numeric(v));
            } else {
                auto& ids = cat_ids[static_cast<std::size_t>(c)];
                auto it = ids.find(tok);
                int id;
                if (it == ids.end()) {
                    id = static_cast<int>(attrs[static_cast<std::size_t>(out_c)].categories.size());
                    ids.emplace(tok, id);
                    attrs[static_cast<std::size_t>(out_c)].categories.push_back(tok);
                } else {
                    id = it->second;
                }
                cells.push_back(Cell::category(id));
            }
            ++out_c;
        }
        labels.push_back(label_from_string(fields[static_cast<std::size_t>(label_col)]));
        rows.push_back(std::move(cells));
    }

    DatasetMeta meta;
    meta.name = path.stem().string();
    meta.source = path.string();
    return Dataset(std::move(meta), std::move(attrs), std::move(rows), std::move(labels));
}

void save_csv(const Dataset& ds, const std::filesystem::path& path,
              const std::string& label_column) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());

    for (int c = 0; c < ds.n_attributes(); ++c) out << quote_field(ds.attribute(c).name) << ',';
    out << quote_field(label_column) << '\n';

    for (int r = 0; r < ds.n_rows(); ++r) {
        for (int c = 0; c < ds.n_attributes(); ++c) {
            const Cell& cell = ds.cell(r, c);
            if (cell.missing) {
                out << '?';
            } else if (ds.attribute(c).kind == AttrKind::Numeric) {
                out << format_double(cell.value);
            } else {
                out << quote_field(
                    ds.attribute(c).categories[static_cast<std::size_t>(cell.category_id())]);
            }
            out << ',';
        }
        out << label_name(ds.label(r)) << '\n';
    }
    if (!out) throw DataError("error while writing " + path.string());
}

}  // namespace upm
