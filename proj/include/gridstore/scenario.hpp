#pragma once

#include "gridstore/distribution.hpp"
#include "gridstore/storage.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gridstore {

struct StepSpec {
    Distribution generation;
    Distribution demand;
    friend bool operator==(const StepSpec&, const StepSpec&) = default;
};

/// Generation/demand laws for each step of a horizon plus the storage device.
/// Units are reporting labels only and are never converted.
struct Scenario {
    std::string name;
    std::string energy_unit;
    StorageSpec storage;
    std::vector<StepSpec> steps;

    std::size_t horizon() const { return steps.size(); }
    friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class ScenarioErrorKind { syntax, schema, invariant };

std::string_view to_string(ScenarioErrorKind kind);

/// Rejected scenario document. `path` is a JSON pointer to the offending field.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(ScenarioErrorKind kind, std::string path, const std::string& reason);

    ScenarioErrorKind kind() const { return kind_; }
    const std::string& path() const { return path_; }

private:
    ScenarioErrorKind kind_;
    std::string path_;
};

/// Throws ScenarioError(invariant) for an empty horizon, a broken storage
/// window or a missing unit label.
void validate_scenario(const Scenario& scenario);

/// Parses and validates a scenario document.
///
/// The document is a JSON object:
///
///     {
///       "name": "fig2_battery",
///       "energy_unit": "kWh",                       // "kWh" or "MWh"
///       "horizon": 1,
///       "storage": {"s_min": 0, "s_max": 5, "s_init": 0},
///       "steps": [
///         {"generation": {"kind": "deterministic", "value": 2},
///          "demand": {"kind": "weibull", "scale": 2, "shape": 5}}
///       ]
///     }
///
/// Distribution kinds: "lognormal" with either {mu, sigma} or
/// {mean, variance} (never both), "weibull" {scale, shape},
/// "deterministic" {value}, "empirical" {samples}. Moment-form log-normals
/// are converted on load. Unknown keys are schema errors.
Scenario parse_scenario(std::string_view document);

/// Reads `path` and parses it. I/O failures throw std::runtime_error.
Scenario load_scenario(const std::string& path);

/// Canonical document for `scenario`; log-normals are written in log-space
/// form, so parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

} // namespace gridstore
