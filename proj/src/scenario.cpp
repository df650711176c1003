#include "gridstore/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace gridstore {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(ScenarioErrorKind kind, const std::string& path, const std::string& reason) {
    throw ScenarioError(kind, path, reason);
}

void require_object(const json& node, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
    if (!node.is_object()) fail(ScenarioErrorKind::schema, path, "expected an object");
    for (const auto& item : node.items()) {
        bool known = false;
        for (auto key : allowed) known = known || item.key() == key;
        if (!known) fail(ScenarioErrorKind::schema, path + "/" + item.key(), "unknown field");
    }
}

const json& field(const json& node, const std::string& path, const char* key) {
    const auto it = node.find(key);
    if (it == node.end()) fail(ScenarioErrorKind::schema, path + "/" + key, "missing field");
    return *it;
}

double number(const json& node, const std::string& path, const char* key) {
    const json& value = field(node, path, key);
    if (!value.is_number()) fail(ScenarioErrorKind::schema, path + "/" + key, "expected a number");
    return value.get<double>();
}

std::string text(const json& node, const std::string& path, const char* key) {
    const json& value = field(node, path, key);
    if (!value.is_string()) fail(ScenarioErrorKind::schema, path + "/" + key, "expected a string");
    return value.get<std::string>();
}

Distribution parse_distribution(const json& node, const std::string& path) {
    if (!node.is_object()) fail(ScenarioErrorKind::schema, path, "expected an object");
    const std::string kind = text(node, path, "kind");
    try {
        if (kind == "lognormal") {
            require_object(node, path, {"kind", "mu", "sigma", "mean", "variance"});
            const bool log_form = node.contains("mu") || node.contains("sigma");
            const bool moment_form = node.contains("mean") || node.contains("variance");
            if (log_form && moment_form) {
                fail(ScenarioErrorKind::schema, path,
                     "lognormal takes either {mu, sigma} or {mean, variance}, not both");
            }
            if (moment_form) {
                const double m = number(node, path, "mean");
                const double v = number(node, path, "variance");
                try {
                    return lognormal_from_moments(m, v);
                } catch (const std::domain_error& e) {
                    fail(ScenarioErrorKind::invariant, path, e.what());
                }
            }
            return Distribution::lognormal(number(node, path, "mu"), number(node, path, "sigma"));
        }
        if (kind == "weibull") {
            require_object(node, path, {"kind", "scale", "shape"});
            return Distribution::weibull(number(node, path, "scale"), number(node, path, "shape"));
        }
        if (kind == "deterministic") {
            require_object(node, path, {"kind", "value"});
            return Distribution::deterministic(number(node, path, "value"));
        }
        if (kind == "empirical") {
            require_object(node, path, {"kind", "samples"});
            const json& list = field(node, path, "samples");
            if (!list.is_array()) fail(ScenarioErrorKind::schema, path + "/samples", "expected an array");
            std::vector<double> samples;
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (!list[i].is_number()) {
                    fail(ScenarioErrorKind::schema, path + "/samples/" + std::to_string(i),
                         "expected a number");
                }
                samples.push_back(list[i].get<double>());
            }
            return Distribution::empirical(std::move(samples));
        }
    } catch (const std::invalid_argument& e) {
        fail(ScenarioErrorKind::invariant, path, e.what());
    }
    fail(ScenarioErrorKind::schema, path + "/kind", "unknown distribution kind '" + kind + "'");
}

StorageSpec parse_storage(const json& node, const std::string& path) {
    require_object(node, path, {"s_min", "s_max", "s_init"});
    StorageSpec spec{number(node, path, "s_min"), number(node, path, "s_max"),
                     number(node, path, "s_init")};
    if (spec.s_min < 0.0) fail(ScenarioErrorKind::invariant, path + "/s_min", "S_min >= 0 violated");
    if (!(spec.s_max > spec.s_min)) {
        fail(ScenarioErrorKind::invariant, path + "/s_max", "S_max > S_min violated");
    }
    if (!spec.contains(spec.s_init)) {
        fail(ScenarioErrorKind::invariant, path + "/s_init", "S_min <= s_init <= S_max violated");
    }
    return spec;
}

ordered_json distribution_json(const Distribution& dist) {
    ordered_json out;
    out["kind"] = std::string(to_string(dist.kind()));
    if (const auto* d = dist.as<LogNormal>()) {
        out["mu"] = d->mu;
        out["sigma"] = d->sigma;
    } else if (const auto* d = dist.as<Weibull>()) {
        out["scale"] = d->scale;
        out["shape"] = d->shape;
    } else if (const auto* d = dist.as<Deterministic>()) {
        out["value"] = d->value;
    } else if (const auto* d = dist.as<Empirical>()) {
        out["samples"] = d->samples;
    }
    return out;
}

} // namespace

std::string_view to_string(ScenarioErrorKind kind) {
    switch (kind) {
    case ScenarioErrorKind::syntax: return "syntax";
    case ScenarioErrorKind::schema: return "schema";
    case ScenarioErrorKind::invariant: return "invariant";
    }
    return "unknown";
}

ScenarioError::ScenarioError(ScenarioErrorKind kind, std::string path, const std::string& reason)
    : std::runtime_error(std::string(to_string(kind)) + " error at '" + path + "': " + reason),
      kind_(kind), path_(std::move(path)) {}

void validate_scenario(const Scenario& scenario) {
    if (scenario.steps.empty()) fail(ScenarioErrorKind::invariant, "/steps", "horizon must be >= 1");
    if (scenario.energy_unit.empty()) fail(ScenarioErrorKind::invariant, "/energy_unit", "unit label missing");
    try {
        scenario.storage.validate();
    } catch (const std::invalid_argument& e) {
        fail(ScenarioErrorKind::invariant, "/storage", e.what());
    }
}

Scenario parse_scenario(std::string_view document) {
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        fail(ScenarioErrorKind::syntax, "", e.what());
    }
    require_object(root, "", {"name", "energy_unit", "horizon", "storage", "steps"});

    Scenario scenario;
    scenario.name = text(root, "", "name");
    scenario.energy_unit = text(root, "", "energy_unit");
    if (scenario.energy_unit != "kWh" && scenario.energy_unit != "MWh") {
        fail(ScenarioErrorKind::invariant, "/energy_unit", "unit must be kWh or MWh");
    }

    const json& horizon = field(root, "", "horizon");
    if (!horizon.is_number_unsigned()) {
        fail(ScenarioErrorKind::schema, "/horizon", "expected a nonnegative integer");
    }
    scenario.storage = parse_storage(field(root, "", "storage"), "/storage");

    const json& steps = field(root, "", "steps");
    if (!steps.is_array()) fail(ScenarioErrorKind::schema, "/steps", "expected an array");
    for (std::size_t t = 0; t < steps.size(); ++t) {
        const std::string path = "/steps/" + std::to_string(t);
        require_object(steps[t], path, {"generation", "demand"});
        scenario.steps.push_back(StepSpec{
            parse_distribution(field(steps[t], path, "generation"), path + "/generation"),
            parse_distribution(field(steps[t], path, "demand"), path + "/demand"),
        });
    }

    if (horizon.get<std::uint64_t>() < 1) fail(ScenarioErrorKind::invariant, "/horizon", "horizon must be >= 1");
    if (horizon.get<std::uint64_t>() != scenario.steps.size()) {
        fail(ScenarioErrorKind::invariant, "/steps", "number of steps differs from horizon");
    }
    validate_scenario(scenario);
    return scenario;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string serialize_scenario(const Scenario& scenario) {
    ordered_json root;
    root["name"] = scenario.name;
    root["energy_unit"] = scenario.energy_unit;
    root["horizon"] = scenario.horizon();
    root["storage"] = {{"s_min", scenario.storage.s_min},
                       {"s_max", scenario.storage.s_max},
                       {"s_init", scenario.storage.s_init}};
    ordered_json steps = ordered_json::array();
    for (const auto& step : scenario.steps) {
        ordered_json entry;
        entry["generation"] = distribution_json(step.generation);
        entry["demand"] = distribution_json(step.demand);
        steps.push_back(std::move(entry));
    }
    root["steps"] = std::move(steps);
    return root.dump(2) + "\n";
}

} // namespace gridstore
