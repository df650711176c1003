#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace gridstore {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class ColumnKind { index, real, probability, text };

struct Column {
    std::string name;
    ColumnKind kind;
    friend bool operator==(const Column&, const Column&) = default;
};

using Cell = std::variant<std::int64_t, double, std::string>;

struct TableMetadata {
    std::string scenario;
    std::uint64_t seed = 0;
    std::uint64_t n = 0;
    std::string tool_version{kToolVersion};
    /// Extra key/value annotations, written in insertion order.
    std::vector<std::pair<std::string, std::string>> notes;

    friend bool operator==(const TableMetadata&, const TableMetadata&) = default;
};

/// Rectangular table of typed cells. Index columns hold integers,
/// real/probability columns hold doubles, text columns hold strings.
class ResultTable {
public:
    ResultTable(std::vector<Column> columns, TableMetadata metadata);

    /// Throws std::invalid_argument on arity or cell-type mismatch.
    void add_row(std::vector<Cell> row);

    const std::vector<Column>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    const TableMetadata& metadata() const { return metadata_; }
    TableMetadata& metadata() { return metadata_; }

    friend bool operator==(const ResultTable&, const ResultTable&) = default;

private:
    std::vector<Column> columns_;
    std::vector<std::vector<Cell>> rows_;
    TableMetadata metadata_;
};

enum class OutputFormat { csv, json };

/// Throws std::invalid_argument for anything but "csv" or "json".
OutputFormat parse_format(std::string_view name);

/// CSV: header row, LF line endings, "." decimals, probabilities at 9
/// significant digits, other reals in shortest round-trip form; no metadata.
/// JSON: {"metadata": {...}, "schema": [...], "columns": {name: [values]}}
/// at full precision. Output is a pure function of the table.
std::string write_results(const ResultTable& table, OutputFormat format);

/// Inverse of the JSON writer.
ResultTable parse_results_json(std::string_view document);

} // namespace gridstore
