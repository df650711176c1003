#pragma once

#include "gridstore/balance.hpp"
#include "gridstore/monte_carlo.hpp"
#include "gridstore/results.hpp"
#include "gridstore/scenario.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gridstore {

/// Process exit codes shared by every command.
enum class ExitCode : int {
    ok = 0,
    validation_failed = 1,
    config_error = 2,
    scenario_error = 3,
    numeric_budget_exceeded = 4,
};

enum class Command { simulate, analyze, sweep, validate };

struct RunConfig {
    Command command = Command::simulate;
    std::string scenario_path;
    std::uint64_t seed = 0;
    std::uint64_t n = 100000;
    std::string output_path; // empty: write the table to the summary stream
    OutputFormat format = OutputFormat::csv;
    std::size_t grid_cells = kDefaultGridCells;
    double coverage = kDefaultCoverage;
    std::optional<double> s_prev;
    std::optional<std::vector<double>> levels;
    std::optional<std::size_t> step; // 1-based
};

using ClosedForm = std::function<OutcomeProbabilities(double g_next, double s_prev,
                                                      const StorageSpec& storage,
                                                      const Weibull& demand)>;

/// Analytic model of one scenario step. The balance grid is built once and
/// reused for every storage level; when generation is known and demand is
/// Weibull the closed form is available as well.
class StepModel {
public:
    StepModel(const StepSpec& step, const StorageSpec& storage, std::size_t grid_cells,
              double coverage, ClosedForm closed_form = weibull_closed_form);

    bool has_closed_form() const { return weibull_.has_value(); }
    const DensityGrid& balance() const { return balance_; }

    OutcomeProbabilities grid(double s_prev) const;
    /// Closed form if available, grid otherwise.
    OutcomeProbabilities primary(double s_prev) const;
    std::string_view primary_method() const { return has_closed_form() ? "closed_form" : "grid"; }

private:
    StorageSpec storage_;
    DensityGrid balance_;
    std::optional<Weibull> weibull_;
    double g_value_ = 0.0;
    ClosedForm closed_form_;
};

/// n + 1 levels spaced evenly over [s_min, s_max], endpoints exact.
std::vector<double> even_levels(const StorageSpec& storage, std::size_t intervals = 50);

ResultTable trajectory_table(const Scenario& scenario, const Trajectory& trajectory,
                             const TableMetadata& metadata);
ResultTable ensemble_table(const EnsembleStats& stats, const TableMetadata& metadata);

/// One row per selected step at `s_prev`.
ResultTable analyze_table(const Scenario& scenario, double s_prev,
                          const std::vector<std::size_t>& steps, std::size_t grid_cells,
                          double coverage, const TableMetadata& metadata);

ResultTable sweep_table(const Scenario& scenario, std::size_t step,
                        const std::vector<double>& levels, std::uint64_t n, std::uint64_t seed,
                        std::size_t grid_cells, double coverage, const TableMetadata& metadata);

struct ValidationReport {
    ResultTable table;
    std::vector<std::string> failures; // one line per offending row
    bool gated = true;                 // false when n is too small for a meaningful gate

    bool passed() const { return failures.empty(); }
};

/// Extra tolerance granted to grid values on top of the Monte Carlo
/// interval, covering discretization error at the default resolution.
inline constexpr double kGridTolerance = 1e-4;

/// Compares every analytic probability (closed form and grid) for every
/// step and level against Monte Carlo frequencies from the same draws.
ValidationReport validate_against_monte_carlo(const Scenario& scenario,
                                              const std::vector<double>& levels, std::uint64_t n,
                                              std::uint64_t seed, std::size_t grid_cells,
                                              double coverage, const TableMetadata& metadata,
                                              ClosedForm closed_form = weibull_closed_form);

/// Runs one command. Result files go to config.output_path (or `out`), the
/// human-readable summary to `out`, diagnostics to `err`.
ExitCode run_command(const RunConfig& config, std::ostream& out, std::ostream& err,
                     ClosedForm closed_form = weibull_closed_form);

} // namespace gridstore
