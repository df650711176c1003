#include "gridstore/commands.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gridstore;
namespace fs = std::filesystem;

namespace {

const std::string kScenarioDir = GRIDSTORE_SCENARIO_DIR;
const std::string kFixtureDir = GRIDSTORE_FIXTURE_DIR;

struct Outcome {
    ExitCode code;
    std::string out;
    std::string err;
};

Outcome run(const RunConfig& config, ClosedForm closed_form = weibull_closed_form) {
    std::ostringstream out, err;
    const ExitCode code = run_command(config, out, err, std::move(closed_form));
    return {code, out.str(), err.str()};
}

RunConfig config_for(Command command, const std::string& scenario) {
    RunConfig c;
    c.command = command;
    c.scenario_path = kScenarioDir + "/" + scenario;
    return c;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("gridstore_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ResultTable run_json(RunConfig config) {
    config.format = OutputFormat::json;
    const Outcome o = run(config);
    REQUIRE(o.code == ExitCode::ok);
    return parse_results_json(o.out);
}

double cell(const ResultTable& table, std::size_t row, const std::string& column) {
    for (std::size_t c = 0; c < table.columns().size(); ++c) {
        if (table.columns()[c].name == column) return std::get<double>(table.rows().at(row).at(c));
    }
    FAIL("no column " << column);
    return 0.0;
}

// The closed-form expressions as they were originally printed.
OutcomeProbabilities printed_closed_form(double g, double s, const StorageSpec& storage, const Weibull& w) {
    OutcomeProbabilities p;
    const double a = g - s - storage.s_min;
    const double b = g + s - storage.s_max;
    p.p_deficit = a > 0.0 ? 1.0 - std::exp(-std::pow(a / w.scale, w.shape)) : 0.0;
    p.p_overflow = b > 0.0 ? std::exp(-std::pow(b / w.scale, w.shape)) : 1.0;
    p.p_self = 1.0 - p.p_deficit - p.p_overflow;
    return p;
}

} // namespace

TEST_CASE("analyze on the battery scenario") {
    RunConfig c = config_for(Command::analyze, "fig2_battery.json");

    c.s_prev = 0.0;
    ResultTable t = run_json(c);
    REQUIRE(t.rows().size() == 1);
    CHECK(cell(t, 0, "p_A") == doctest::Approx(0.367879441171442322).epsilon(1e-12));
    CHECK(cell(t, 0, "p_B") == 0.0);
    CHECK(cell(t, 0, "grid_p_A") == doctest::Approx(0.367879).epsilon(1e-3));
    CHECK(std::get<std::string>(t.rows()[0][2]) == "closed_form");

    c.s_prev = 4.0;
    t = run_json(c);
    CHECK(cell(t, 0, "p_B") == doctest::Approx(0.0307667655236559182).epsilon(1e-12));

    c.s_prev = 5.0;
    t = run_json(c);
    CHECK(cell(t, 0, "p_B") == doctest::Approx(0.632120558828557678).epsilon(1e-12));
    CHECK(cell(t, 0, "p_self") + cell(t, 0, "p_not_self") == doctest::Approx(1.0));

    SUBCASE("csv to stdout") {
        c.s_prev = 0.0;
        const Outcome o = run(c);
        CHECK(o.code == ExitCode::ok);
        CHECK(o.out.rfind("step,s_prev,method,p_A,", 0) == 0);
        CHECK(o.out.find("1,0,closed_form,0.367879441,0,") != std::string::npos);
    }
}

TEST_CASE("exit codes") {
    SUBCASE("level outside the window is a config error") {
        RunConfig c = config_for(Command::analyze, "fig2_battery.json");
        c.s_prev = -1.0;
        const Outcome o = run(c);
        CHECK(o.code == ExitCode::config_error);
        CHECK(o.err.find("outside storage window") != std::string::npos);
    }
    SUBCASE("missing scenario file") {
        RunConfig c = config_for(Command::analyze, "nope.json");
        c.s_prev = 0.0;
        CHECK(run(c).code == ExitCode::config_error);
    }
    SUBCASE("broken scenario") {
        RunConfig c;
        c.command = Command::analyze;
        c.s_prev = 0.0;
        c.scenario_path = kFixtureDir + "/invalid_smax_eq_smin.json";
        const Outcome o = run(c);
        CHECK(o.code == ExitCode::scenario_error);
        CHECK(o.err.find("S_max > S_min") != std::string::npos);
    }
    SUBCASE("grid mass budget") {
        RunConfig c = config_for(Command::analyze, "day24_lognormal.json");
        c.s_prev = 2.5;
        c.step = 1;
        c.coverage = 0.99;
        const Outcome o = run(c);
        CHECK(o.code == ExitCode::numeric_budget_exceeded);
        CHECK(o.err.find("exceeds budget") != std::string::npos);
    }
    SUBCASE("sweep needs enough samples") {
        RunConfig c = config_for(Command::sweep, "fig2_battery.json");
        c.n = 10;
        CHECK(run(c).code == ExitCode::config_error);
    }
    SUBCASE("simulate needs an output path") {
        CHECK(run(config_for(Command::simulate, "fig2_battery.json")).code == ExitCode::config_error);
    }
    SUBCASE("step out of range") {
        RunConfig c = config_for(Command::analyze, "fig2_battery.json");
        c.s_prev = 0.0;
        c.step = 2;
        CHECK(run(c).code == ExitCode::config_error);
    }
}

TEST_CASE("sweep") {
    RunConfig c = config_for(Command::sweep, "fig2_battery.json");
    c.n = 20000;
    c.seed = 3;
    const ResultTable t = run_json(c);
    REQUIRE(t.rows().size() == 51);
    CHECK(cell(t, 0, "level") == 0.0);
    CHECK(cell(t, 50, "level") == 5.0);
    for (std::size_t i = 1; i < t.rows().size(); ++i) {
        CHECK(cell(t, i, "p_A_analytic") <= cell(t, i - 1, "p_A_analytic"));
        CHECK(cell(t, i, "p_B_analytic") >= cell(t, i - 1, "p_B_analytic"));
    }

    SUBCASE("a single level matches analyze") {
        RunConfig one = c;
        one.levels = std::vector<double>{4.0};
        const ResultTable s = run_json(one);
        REQUIRE(s.rows().size() == 1);
        RunConfig a = config_for(Command::analyze, "fig2_battery.json");
        a.s_prev = 4.0;
        const ResultTable r = run_json(a);
        CHECK(cell(s, 0, "p_A_analytic") == cell(r, 0, "p_A"));
        CHECK(cell(s, 0, "p_B_analytic") == cell(r, 0, "p_B"));
        CHECK(cell(s, 0, "p_self_analytic") == cell(r, 0, "p_self"));
    }
    SUBCASE("multi-step scenario needs a step") {
        RunConfig d = config_for(Command::sweep, "day24_lognormal.json");
        d.n = 2000;
        CHECK(run(d).code == ExitCode::config_error);
        d.step = 12;
        d.levels = std::vector<double>{0.0, 2.5, 5.0};
        const ResultTable s = run_json(d);
        CHECK(s.rows().size() == 3);
        CHECK(std::get<std::string>(s.rows()[0].back()) == "grid");
    }
}

TEST_CASE("validate") {
    SUBCASE("battery scenario passes at a million samples") {
        RunConfig c = config_for(Command::validate, "fig2_battery.json");
        c.n = 1'000'000;
        c.seed = 7;
        const Outcome o = run(c);
        CHECK(o.code == ExitCode::ok);
        CHECK(o.err.find("FAIL") == std::string::npos);
    }
    SUBCASE("printed expressions are rejected") {
        RunConfig c = config_for(Command::validate, "fig2_battery.json");
        c.n = 1'000'000;
        c.seed = 7;
        c.levels = std::vector<double>{0.0, 2.0, 4.0};
        const Outcome o = run(c, printed_closed_form);
        CHECK(o.code == ExitCode::validation_failed);
        CHECK(o.err.find("FAIL step 1 level 0 closed_form p_A") != std::string::npos);
        CHECK(o.err.find("FAIL step 1 level 4 closed_form p_B") != std::string::npos);
        // The grid path does not use the closed form and still passes.
        CHECK(o.err.find(" grid ") == std::string::npos);
    }
    SUBCASE("small n runs ungated with a caveat") {
        RunConfig c = config_for(Command::validate, "fig2_battery.json");
        c.n = 100;
        c.format = OutputFormat::json;
        const Outcome o = run(c, printed_closed_form);
        CHECK(o.code == ExitCode::ok);
        CHECK(o.err.find("warning") != std::string::npos);
        const ResultTable t = parse_results_json(o.out);
        bool caveat = false;
        for (const auto& [k, v] : t.metadata().notes) caveat = caveat || k == "caveat";
        CHECK(caveat);
    }
}

TEST_CASE("simulate writes both tables reproducibly") {
    const fs::path dir = scratch_dir("simulate");
    RunConfig c = config_for(Command::simulate, "day24_lognormal.json");
    c.n = 3000;
    c.seed = 11;
    c.output_path = (dir / "day.csv").string();
    REQUIRE(run(c).code == ExitCode::ok);

    const std::string first = slurp(dir / "day.csv");
    const std::string ensemble = slurp(dir / "day.ensemble.csv");
    CHECK(std::count(first.begin(), first.end(), '\n') == 25);
    CHECK(std::count(ensemble.begin(), ensemble.end(), '\n') == 25);
    CHECK(first.rfind("step,g,d,b,s,spill,deficit\n", 0) == 0);

    REQUIRE(run(c).code == ExitCode::ok);
    CHECK(slurp(dir / "day.csv") == first);
    CHECK(slurp(dir / "day.ensemble.csv") == ensemble);

    c.format = OutputFormat::json;
    c.output_path = (dir / "day.json").string();
    REQUIRE(run(c).code == ExitCode::ok);
    const ResultTable t = parse_results_json(slurp(dir / "day.json"));
    CHECK(t.rows().size() == 24);
    CHECK(t.metadata().seed == 11);
    CHECK(fs::exists(dir / "day.ensemble.json"));
    fs::remove_all(dir);
}

TEST_CASE("even_levels") {
    const auto levels = even_levels(StorageSpec{0.0, 5.0, 0.0});
    REQUIRE(levels.size() == 51);
    CHECK(levels.front() == 0.0);
    CHECK(levels[25] == doctest::Approx(2.5));
    CHECK(levels.back() == 5.0);
}
