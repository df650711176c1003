#include "gridstore/results.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

#include <json.hpp>

namespace gridstore {

namespace {

using nlohmann::ordered_json;

std::string_view kind_name(ColumnKind kind) {
    switch (kind) {
    case ColumnKind::index: return "index";
    case ColumnKind::real: return "real";
    case ColumnKind::probability: return "probability";
    case ColumnKind::text: return "text";
    }
    return "text";
}

ColumnKind kind_from_name(std::string_view name) {
    for (auto kind : {ColumnKind::index, ColumnKind::real, ColumnKind::probability, ColumnKind::text}) {
        if (kind_name(kind) == name) return kind;
    }
    throw std::invalid_argument("unknown column kind '" + std::string(name) + "'");
}

bool cell_fits(const Cell& cell, ColumnKind kind) {
    switch (kind) {
    case ColumnKind::index: return std::holds_alternative<std::int64_t>(cell);
    case ColumnKind::real:
    case ColumnKind::probability: return std::holds_alternative<double>(cell);
    case ColumnKind::text: return std::holds_alternative<std::string>(cell);
    }
    return false;
}

std::string format_double(double value, ColumnKind kind) {
    std::array<char, 64> buf{};
    const auto result = kind == ColumnKind::probability
                            ? std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                            std::chars_format::general, 9)
                            : std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), result.ptr);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string write_csv(const ResultTable& table) {
    std::string out;
    const auto& columns = table.columns();
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += csv_escape(columns[c].name);
    }
    out += '\n';
    for (const auto& row : table.rows()) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            if (const auto* i = std::get_if<std::int64_t>(&row[c])) {
                out += std::to_string(*i);
            } else if (const auto* d = std::get_if<double>(&row[c])) {
                out += format_double(*d, columns[c].kind);
            } else {
                out += csv_escape(std::get<std::string>(row[c]));
            }
        }
        out += '\n';
    }
    return out;
}

std::string write_json(const ResultTable& table) {
    const TableMetadata& meta = table.metadata();
    ordered_json metadata;
    metadata["scenario"] = meta.scenario;
    metadata["seed"] = meta.seed;
    metadata["n"] = meta.n;
    metadata["tool_version"] = meta.tool_version;
    ordered_json notes = ordered_json::object();
    for (const auto& [key, value] : meta.notes) notes[key] = value;
    metadata["notes"] = std::move(notes);

    ordered_json schema = ordered_json::array();
    ordered_json columns = ordered_json::object();
    for (std::size_t c = 0; c < table.columns().size(); ++c) {
        const Column& column = table.columns()[c];
        schema.push_back({{"name", column.name}, {"kind", kind_name(column.kind)}});
        ordered_json values = ordered_json::array();
        for (const auto& row : table.rows()) {
            std::visit([&](const auto& v) { values.push_back(v); }, row[c]);
        }
        columns[column.name] = std::move(values);
    }

    ordered_json root;
    root["metadata"] = std::move(metadata);
    root["schema"] = std::move(schema);
    root["columns"] = std::move(columns);
    return root.dump(2) + "\n";
}

} // namespace

ResultTable::ResultTable(std::vector<Column> columns, TableMetadata metadata)
    : columns_(std::move(columns)), metadata_(std::move(metadata)) {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (columns_[i].name == columns_[j].name) {
                throw std::invalid_argument("duplicate column '" + columns_[i].name + "'");
            }
        }
    }
}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw std::invalid_argument("row width differs from header");
    for (std::size_t c = 0; c < row.size(); ++c) {
        if (!cell_fits(row[c], columns_[c].kind)) {
            throw std::invalid_argument("cell type mismatch in column '" + columns_[c].name + "'");
        }
    }
    rows_.push_back(std::move(row));
}

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw std::invalid_argument("unsupported output format '" + std::string(name) + "'");
}

std::string write_results(const ResultTable& table, OutputFormat format) {
    switch (format) {
    case OutputFormat::csv: return write_csv(table);
    case OutputFormat::json: return write_json(table);
    }
    throw std::invalid_argument("unsupported output format");
}

ResultTable parse_results_json(std::string_view document) {
    const ordered_json root = ordered_json::parse(document);
    const ordered_json& meta = root.at("metadata");
    TableMetadata metadata{
        .scenario = meta.at("scenario").get<std::string>(),
        .seed = meta.at("seed").get<std::uint64_t>(),
        .n = meta.at("n").get<std::uint64_t>(),
        .tool_version = meta.at("tool_version").get<std::string>(),
        .notes = {},
    };
    for (const auto& [key, value] : meta.at("notes").items()) {
        metadata.notes.emplace_back(key, value.get<std::string>());
    }

    std::vector<Column> columns;
    for (const auto& entry : root.at("schema")) {
        columns.push_back(Column{entry.at("name").get<std::string>(),
                                 kind_from_name(entry.at("kind").get<std::string>())});
    }
    ResultTable table(columns, std::move(metadata));

    const ordered_json& data = root.at("columns");
    const std::size_t rows = columns.empty() ? 0 : data.at(columns.front().name).size();
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<Cell> row;
        for (const Column& column : columns) {
            const ordered_json& v = data.at(column.name).at(r);
            switch (column.kind) {
            case ColumnKind::index: row.emplace_back(v.get<std::int64_t>()); break;
            case ColumnKind::real:
            case ColumnKind::probability: row.emplace_back(v.get<double>()); break;
            case ColumnKind::text: row.emplace_back(v.get<std::string>()); break;
            }
        }
        table.add_row(std::move(row));
    }
    return table;
}

} // namespace gridstore
