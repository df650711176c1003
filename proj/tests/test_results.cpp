#include "gridstore/results.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace gridstore;

namespace {

ResultTable sweep_like() {
    return ResultTable({{"level", ColumnKind::real},
                        {"p_A", ColumnKind::probability},
                        {"method", ColumnKind::text},
                        {"row", ColumnKind::index}},
                       TableMetadata{"fig2_battery", 7, 1000, std::string(kToolVersion), {{"unit", "kWh"}}});
}

} // namespace

TEST_CASE("csv layout") {
    ResultTable table = sweep_like();
    CHECK(write_results(table, OutputFormat::csv) == "level,p_A,method,row\n");

    for (int i = 0; i < 6; ++i) {
        table.add_row({i * 1.0, 0.367879441171442322 / (i + 1), std::string("closed_form"), std::int64_t{i}});
    }
    const std::string csv = write_results(table, OutputFormat::csv);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.find("0,0.367879441,closed_form,0\n") != std::string::npos);
    CHECK(csv.find("5,0.0613132402,closed_form,5\n") != std::string::npos);
    CHECK(write_results(table, OutputFormat::csv) == csv);
}

TEST_CASE("csv quotes text containing separators") {
    ResultTable table({{"note", ColumnKind::text}}, {});
    table.add_row({std::string("a,\"b\"")});
    CHECK(write_results(table, OutputFormat::csv) == "note\n\"a,\"\"b\"\"\"\n");
}

TEST_CASE("row validation") {
    ResultTable table = sweep_like();
    CHECK_THROWS_AS(table.add_row({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(table.add_row({1.0, 0.5, 2.0, std::int64_t{1}}), std::invalid_argument);
    CHECK_THROWS_AS(ResultTable({{"a", ColumnKind::real}, {"a", ColumnKind::real}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}

TEST_CASE("json round trip keeps full precision") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ResultTable table = sweep_like();
    for (int i = 0; i < 50; ++i) {
        table.add_row({u(gen) * 5.0, u(gen) * 1e-7, std::string(i % 2 ? "grid" : "closed_form"), std::int64_t{i}});
    }
    const std::string json = write_results(table, OutputFormat::json);
    const ResultTable back = parse_results_json(json);
    CHECK(back == table);
    CHECK(write_results(back, OutputFormat::json) == json);

    const ResultTable empty = sweep_like();
    CHECK(parse_results_json(write_results(empty, OutputFormat::json)) == empty);
}
