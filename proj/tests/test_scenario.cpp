#include "gridstore/scenario.hpp"

#include <doctest.h>

#include <string>

using namespace gridstore;

namespace {

const std::string kScenarioDir = GRIDSTORE_SCENARIO_DIR;
const std::string kFixtureDir = GRIDSTORE_FIXTURE_DIR;

ScenarioError capture_error(const std::string& path) {
    try {
        load_scenario(path);
    } catch (const ScenarioError& e) {
        return e;
    }
    FAIL("expected a scenario error for " << path);
    return ScenarioError(ScenarioErrorKind::syntax, "", "unreachable");
}

} // namespace

TEST_CASE("shipped fig2_battery scenario") {
    const Scenario s = load_scenario(kScenarioDir + "/fig2_battery.json");
    CHECK(s.name == "fig2_battery");
    CHECK(s.energy_unit == "kWh");
    CHECK(s.storage == StorageSpec{0.0, 5.0, 0.0});
    REQUIRE(s.horizon() == 1);
    CHECK(s.steps[0].generation == Distribution::deterministic(2.0));
    CHECK(s.steps[0].demand == Distribution::weibull(2.0, 5.0));
}

TEST_CASE("shipped day24_lognormal scenario") {
    const Scenario s = load_scenario(kScenarioDir + "/day24_lognormal.json");
    CHECK(s.energy_unit == "MWh");
    REQUIRE(s.horizon() == 24);
    for (const auto& step : s.steps) {
        REQUIRE(step.generation.as<LogNormal>());
        REQUIRE(step.demand.as<LogNormal>());
        CHECK(mean(step.generation) == doctest::Approx(1.25).epsilon(1e-12));
        CHECK(variance(step.generation) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(mean(s.steps.front().demand) == doctest::Approx(0.94).epsilon(1e-12));
    CHECK(mean(s.steps.back().demand) == doctest::Approx(2.19).epsilon(1e-12));
    CHECK(variance(s.steps.front().demand) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(variance(s.steps.back().demand) == doctest::Approx(1.125).epsilon(1e-12));
}

TEST_CASE("invalid fixtures fail with the documented category") {
    struct Case {
        const char* file;
        ScenarioErrorKind kind;
        const char* path;
        const char* reason;
    };
    const Case cases[] = {
        {"invalid_syntax.json", ScenarioErrorKind::syntax, "", ""},
        {"invalid_smax_eq_smin.json", ScenarioErrorKind::invariant, "/storage/s_max", "S_max > S_min"},
        {"invalid_s_init_outside.json", ScenarioErrorKind::invariant, "/storage/s_init", "s_init"},
        {"invalid_missing_s_init.json", ScenarioErrorKind::schema, "/storage/s_init", "missing"},
        {"invalid_negative_scale.json", ScenarioErrorKind::invariant, "/steps/0/demand", "scale"},
        {"invalid_lognormal_both_forms.json", ScenarioErrorKind::schema, "/steps/0/demand", "not both"},
        {"invalid_unknown_kind.json", ScenarioErrorKind::schema, "/steps/0/demand/kind", "gamma"},
        {"invalid_horizon_mismatch.json", ScenarioErrorKind::invariant, "/steps", "horizon"},
        {"invalid_unit.json", ScenarioErrorKind::invariant, "/energy_unit", "kWh or MWh"},
        {"invalid_empty_empirical.json", ScenarioErrorKind::invariant, "/steps/0/generation", "nonempty"},
    };
    for (const Case& c : cases) {
        CAPTURE(c.file);
        const ScenarioError e = capture_error(kFixtureDir + "/" + c.file);
        CHECK(e.kind() == c.kind);
        CHECK(e.path() == c.path);
        CHECK(std::string(e.what()).find(c.reason) != std::string::npos);
    }
}

TEST_CASE("parse_scenario details") {
    const char* base = R"({"name": "x", "energy_unit": "kWh", "horizon": 1,
        "storage": {"s_min": 0, "s_max": 4, "s_init": 1}, "steps": [ %s ]})";
    const auto doc = [&](const std::string& step) {
        std::string out(base);
        out.replace(out.find("%s"), 2, step);
        return out;
    };

    SUBCASE("moment-form lognormal is converted") {
        const Scenario s = parse_scenario(doc(R"({"generation": {"kind": "lognormal", "mean": 1.25, "variance": 1},
                                                  "demand": {"kind": "empirical", "samples": [1, 2.5]}})"));
        CHECK(s.steps[0].generation == lognormal_from_moments(1.25, 1.0));
        CHECK(s.steps[0].demand == Distribution::empirical({1.0, 2.5}));
    }
    SUBCASE("unknown top-level field") {
        try {
            parse_scenario(R"({"name": "x", "energy_unit": "kWh", "horizon": 0, "storage": {}, "steps": [], "extra": 1})");
            FAIL("accepted");
        } catch (const ScenarioError& e) {
            CHECK(e.kind() == ScenarioErrorKind::schema);
            CHECK(e.path() == "/extra");
        }
    }
    SUBCASE("wrong value type") {
        try {
            parse_scenario(doc(R"({"generation": {"kind": "deterministic", "value": "two"},
                                   "demand": {"kind": "weibull", "scale": 2, "shape": 5}})"));
            FAIL("accepted");
        } catch (const ScenarioError& e) {
            CHECK(e.kind() == ScenarioErrorKind::schema);
            CHECK(e.path() == "/steps/0/generation/value");
        }
    }
    SUBCASE("nonpositive lognormal moments") {
        CHECK_THROWS_AS(parse_scenario(doc(R"({"generation": {"kind": "lognormal", "mean": 0, "variance": 1},
                                                "demand": {"kind": "deterministic", "value": 1}})")),
                        ScenarioError);
    }
    SUBCASE("storage missing file") {
        CHECK_THROWS_AS(load_scenario(kFixtureDir + "/does_not_exist.json"), std::runtime_error);
    }
}

TEST_CASE("serialize and parse round trip preserves every field") {
    for (const char* name : {"fig2_battery.json", "day24_lognormal.json"}) {
        const Scenario s = load_scenario(kScenarioDir + "/" + name);
        const std::string text = serialize_scenario(s);
        const Scenario back = parse_scenario(text);
        CHECK(back == s);
        CHECK(serialize_scenario(back) == text);
    }
    Scenario mixed{"mixed", "MWh", StorageSpec{0.25, 3.75, 1.0 / 3.0},
                   {{Distribution::empirical({0.1, 0.7, 0.30000000000000004}),
                     Distribution::lognormal(-0.1234567890123, 0.987654321)}}};
    CHECK(parse_scenario(serialize_scenario(mixed)) == mixed);
}
