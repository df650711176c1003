#include "gridstore/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace gridstore {

namespace {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_level_name(double q) {
    std::ostringstream name;
    name << "s_q" << std::setw(2) << std::setfill('0') << std::lround(q * 100.0);
    return name.str();
}

std::vector<std::size_t> selected_steps(const Scenario& scenario, const RunConfig& config) {
    if (config.step) {
        if (*config.step < 1 || *config.step > scenario.horizon()) {
            throw ConfigError("--step must lie in [1, " + std::to_string(scenario.horizon()) + "]");
        }
        return {*config.step - 1};
    }
    std::vector<std::size_t> all(scenario.horizon());
    for (std::size_t t = 0; t < all.size(); ++t) all[t] = t;
    return all;
}

std::vector<double> selected_levels(const Scenario& scenario, const RunConfig& config) {
    if (!config.levels) return even_levels(scenario.storage);
    if (config.levels->empty()) throw ConfigError("--levels is empty");
    for (double level : *config.levels) {
        if (!std::isfinite(level) || !scenario.storage.contains(level)) {
            throw ConfigError("level outside storage window");
        }
    }
    return *config.levels;
}

TableMetadata metadata_for(const Scenario& scenario, const RunConfig& config, std::uint64_t n) {
    TableMetadata meta;
    meta.scenario = scenario.name;
    meta.seed = config.seed;
    meta.n = n;
    meta.notes.emplace_back("energy_unit", scenario.energy_unit);
    return meta;
}

void emit(const ResultTable& table, const std::string& path, OutputFormat format, std::ostream& out) {
    const std::string bytes = write_results(table, format);
    if (path.empty()) {
        out << bytes;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file || !file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
        throw ConfigError("cannot write '" + path + "'");
    }
}

std::string ensemble_path(const std::string& out_path) {
    std::filesystem::path p(out_path);
    std::filesystem::path name = p.stem();
    name += ".ensemble";
    name += p.extension();
    return (p.parent_path() / name).string();
}

ExitCode run_simulate(const Scenario& scenario, const RunConfig& config, std::ostream& out) {
    if (config.output_path.empty()) throw ConfigError("simulate needs --out");
    const TableMetadata meta = metadata_for(scenario, config, config.n);
    const Trajectory realization = simulate_trajectory(scenario, config.seed, 0);
    const EnsembleStats stats = simulate_ensemble(scenario, config.n, config.seed);

    const std::string second = ensemble_path(config.output_path);
    emit(trajectory_table(scenario, realization, meta), config.output_path, config.format, out);
    emit(ensemble_table(stats, meta), second, config.format, out);

    out << "simulated " << config.n << " trajectories of " << scenario.horizon() << " steps (seed "
        << config.seed << ")\n"
        << "realization: " << config.output_path << "\nensemble: " << second << "\n";
    return ExitCode::ok;
}

ExitCode run_analyze(const Scenario& scenario, const RunConfig& config, std::ostream& out,
                     std::ostream& err) {
    if (!config.s_prev) throw ConfigError("analyze needs --s-prev");
    if (!std::isfinite(*config.s_prev) || !scenario.storage.contains(*config.s_prev)) {
        throw ConfigError("--s-prev outside storage window");
    }
    TableMetadata meta = metadata_for(scenario, config, 0);
    meta.notes.emplace_back("grid_cells", std::to_string(config.grid_cells));
    const ResultTable table = analyze_table(scenario, *config.s_prev, selected_steps(scenario, config),
                                            config.grid_cells, config.coverage, meta);
    emit(table, config.output_path, config.format, out);

    bool over_budget = false;
    for (const auto& row : table.rows()) {
        const auto step = std::get<std::int64_t>(row[0]);
        const double truncated = std::get<double>(row.back());
        if (truncated > kMassBudget) {
            over_budget = true;
            err << "step " << step << ": grid truncated mass " << truncated << " exceeds budget "
                << kMassBudget << "\n";
        }
        if (!config.output_path.empty()) {
            out << "step " << step << " (" << std::get<std::string>(row[2]) << "): p_A="
                << std::get<double>(row[3]) << " p_B=" << std::get<double>(row[4])
                << " p_self=" << std::get<double>(row[5])
                << " p_not_self=" << std::get<double>(row[6]) << "\n";
        }
    }
    return over_budget ? ExitCode::numeric_budget_exceeded : ExitCode::ok;
}

ExitCode run_sweep(const Scenario& scenario, const RunConfig& config, std::ostream& out) {
    if (config.n < kMinGateSamples) throw ConfigError("sweep needs --n >= 1000");
    const auto steps = selected_steps(scenario, config);
    if (steps.size() != 1 && scenario.horizon() != 1) throw ConfigError("sweep needs --step");
    const std::vector<double> levels = selected_levels(scenario, config);
    const ResultTable table = sweep_table(scenario, steps.front(), levels, config.n, config.seed,
                                          config.grid_cells, config.coverage,
                                          metadata_for(scenario, config, config.n));
    emit(table, config.output_path, config.format, out);
    if (!config.output_path.empty()) {
        out << "swept " << levels.size() << " battery levels at step " << steps.front() + 1
            << "; wrote " << config.output_path << "\n";
    }
    return ExitCode::ok;
}

ExitCode run_validate(const Scenario& scenario, const RunConfig& config, std::ostream& out,
                      std::ostream& err, const ClosedForm& closed_form) {
    Scenario subset = scenario;
    if (config.step) {
        subset.steps = {scenario.steps[selected_steps(scenario, config).front()]};
    }
    const std::vector<double> levels = selected_levels(scenario, config);
    const ValidationReport report =
        validate_against_monte_carlo(subset, levels, config.n, config.seed, config.grid_cells,
                                     config.coverage, metadata_for(scenario, config, config.n),
                                     closed_form);
    emit(report.table, config.output_path, config.format, out);

    if (!report.gated) {
        err << "warning: n=" << config.n << " is below " << kMinGateSamples
            << "; confidence intervals are too wide for a meaningful gate\n";
    }
    for (const auto& line : report.failures) err << "FAIL " << line << "\n";

    const std::size_t comparisons = report.table.rows().size();
    if (!config.output_path.empty() || !report.passed()) {
        out << "validation " << (report.passed() ? "passed" : "FAILED") << ": "
            << report.failures.size() << " of " << comparisons
            << " comparisons outside tolerance" << (report.gated ? "" : " (ungated)") << "\n";
    }
    return report.passed() ? ExitCode::ok : ExitCode::validation_failed;
}

} // namespace

StepModel::StepModel(const StepSpec& step, const StorageSpec& storage, std::size_t grid_cells,
                     double coverage, ClosedForm closed_form)
    : storage_(storage),
      balance_(difference_density(discretize(step.generation, grid_cells, coverage),
                                  discretize(step.demand, grid_cells, coverage))),
      closed_form_(std::move(closed_form)) {
    const auto* gen = step.generation.as<Deterministic>();
    const auto* dem = step.demand.as<Weibull>();
    if (gen && dem) {
        weibull_ = *dem;
        g_value_ = gen->value;
    }
}

OutcomeProbabilities StepModel::grid(double s_prev) const {
    return self_sufficiency(balance_, BalanceQuery{s_prev, storage_});
}

OutcomeProbabilities StepModel::primary(double s_prev) const {
    if (weibull_) return closed_form_(g_value_, s_prev, storage_, *weibull_);
    return grid(s_prev);
}

std::vector<double> even_levels(const StorageSpec& storage, std::size_t intervals) {
    std::vector<double> levels(intervals + 1);
    const double width = storage.s_max - storage.s_min;
    for (std::size_t i = 0; i <= intervals; ++i) {
        levels[i] = storage.s_min + width * static_cast<double>(i) / static_cast<double>(intervals);
    }
    levels.back() = storage.s_max;
    return levels;
}

ResultTable trajectory_table(const Scenario& scenario, const Trajectory& trajectory,
                             const TableMetadata& metadata) {
    TableMetadata meta = metadata;
    meta.notes.emplace_back("s_init", std::to_string(scenario.storage.s_init));
    ResultTable table({{"step", ColumnKind::index},
                       {"g", ColumnKind::real},
                       {"d", ColumnKind::real},
                       {"b", ColumnKind::real},
                       {"s", ColumnKind::real},
                       {"spill", ColumnKind::real},
                       {"deficit", ColumnKind::real}},
                      std::move(meta));
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
        table.add_row({static_cast<std::int64_t>(t + 1), trajectory.g[t], trajectory.d[t],
                       trajectory.b[t], trajectory.s[t], trajectory.spill[t],
                       trajectory.deficit[t]});
    }
    return table;
}

ResultTable ensemble_table(const EnsembleStats& stats, const TableMetadata& metadata) {
    std::vector<Column> columns{{"step", ColumnKind::index},
                                {"mean_g", ColumnKind::real},
                                {"mean_d", ColumnKind::real},
                                {"mean_b", ColumnKind::real},
                                {"mean_s", ColumnKind::real}};
    for (double q : stats.quantile_levels) columns.push_back({format_level_name(q), ColumnKind::real});
    columns.push_back({"spill_frequency", ColumnKind::probability});
    columns.push_back({"deficit_frequency", ColumnKind::probability});
    columns.push_back({"mean_spill", ColumnKind::real});
    columns.push_back({"mean_deficit", ColumnKind::real});

    ResultTable table(std::move(columns), metadata);
    for (std::size_t t = 0; t < stats.steps.size(); ++t) {
        const StepStats& s = stats.steps[t];
        std::vector<Cell> row{static_cast<std::int64_t>(t + 1), s.mean_g, s.mean_d, s.mean_b, s.mean_s};
        for (double q : s.s_quantiles) row.emplace_back(q);
        row.emplace_back(s.spill_frequency);
        row.emplace_back(s.deficit_frequency);
        row.emplace_back(s.mean_spill);
        row.emplace_back(s.mean_deficit);
        table.add_row(std::move(row));
    }
    return table;
}

ResultTable analyze_table(const Scenario& scenario, double s_prev,
                          const std::vector<std::size_t>& steps, std::size_t grid_cells,
                          double coverage, const TableMetadata& metadata) {
    ResultTable table({{"step", ColumnKind::index},
                       {"s_prev", ColumnKind::real},
                       {"method", ColumnKind::text},
                       {"p_A", ColumnKind::probability},
                       {"p_B", ColumnKind::probability},
                       {"p_self", ColumnKind::probability},
                       {"p_not_self", ColumnKind::probability},
                       {"grid_p_A", ColumnKind::probability},
                       {"grid_p_B", ColumnKind::probability},
                       {"grid_p_self", ColumnKind::probability},
                       {"truncated_mass", ColumnKind::real}},
                      metadata);
    for (std::size_t t : steps) {
        const StepModel model(scenario.steps.at(t), scenario.storage, grid_cells, coverage);
        const OutcomeProbabilities main = model.primary(s_prev);
        const OutcomeProbabilities grid = model.grid(s_prev);
        table.add_row({static_cast<std::int64_t>(t + 1), s_prev, std::string(model.primary_method()),
                       main.p_deficit, main.p_overflow, main.p_self, main.p_not_self(),
                       grid.p_deficit, grid.p_overflow, grid.p_self, grid.truncated_mass});
    }
    return table;
}

ResultTable sweep_table(const Scenario& scenario, std::size_t step,
                        const std::vector<double>& levels, std::uint64_t n, std::uint64_t seed,
                        std::size_t grid_cells, double coverage, const TableMetadata& metadata) {
    const StepSpec& spec = scenario.steps.at(step);
    std::vector<SweepRow> rows;
    std::string method = "closed_form";
    const auto* gen = spec.generation.as<Deterministic>();
    const auto* dem = spec.demand.as<Weibull>();
    if (gen && dem) {
        rows = sweep_battery_levels(gen->value, *dem, scenario.storage, levels, n, seed);
    } else {
        method = "grid";
        const StepModel model(spec, scenario.storage, grid_cells, coverage);
        const BalanceSample draws(spec.generation, spec.demand, n, seed);
        for (double level : levels) {
            rows.push_back(SweepRow{level, model.grid(level),
                                    draws.classify(BalanceQuery{level, scenario.storage})});
        }
    }

    TableMetadata meta = metadata;
    meta.notes.emplace_back("step", std::to_string(step + 1));
    ResultTable table({{"level", ColumnKind::real},
                       {"p_A_analytic", ColumnKind::probability},
                       {"p_B_analytic", ColumnKind::probability},
                       {"p_self_analytic", ColumnKind::probability},
                       {"p_A_mc", ColumnKind::probability},
                       {"p_B_mc", ColumnKind::probability},
                       {"p_self_mc", ColumnKind::probability},
                       {"ci_halfwidth", ColumnKind::real},
                       {"p_not_self_analytic", ColumnKind::probability},
                       {"method", ColumnKind::text}},
                      std::move(meta));
    for (const SweepRow& row : rows) {
        const double ci = std::max({row.mc.deficit.ci_halfwidth, row.mc.overflow.ci_halfwidth,
                                    row.mc.self.ci_halfwidth});
        table.add_row({row.level, row.analytic.p_deficit, row.analytic.p_overflow,
                       row.analytic.p_self, row.mc.deficit.p_hat, row.mc.overflow.p_hat,
                       row.mc.self.p_hat, ci, row.analytic.p_not_self(), method});
    }
    return table;
}

ValidationReport validate_against_monte_carlo(const Scenario& scenario,
                                              const std::vector<double>& levels, std::uint64_t n,
                                              std::uint64_t seed, std::size_t grid_cells,
                                              double coverage, const TableMetadata& metadata,
                                              ClosedForm closed_form) {
    validate_scenario(scenario);
    TableMetadata meta = metadata;
    const bool gated = n >= kMinGateSamples;
    if (!gated) meta.notes.emplace_back("caveat", "n below gate minimum; results ungated");

    ValidationReport report{
        ResultTable({{"step", ColumnKind::index},
                     {"level", ColumnKind::real},
                     {"method", ColumnKind::text},
                     {"quantity", ColumnKind::text},
                     {"analytic", ColumnKind::probability},
                     {"mc", ColumnKind::probability},
                     {"tolerance", ColumnKind::real},
                     {"pass", ColumnKind::index}},
                    std::move(meta)),
        {},
        gated,
    };

    for (std::size_t t = 0; t < scenario.horizon(); ++t) {
        const StepSpec& spec = scenario.steps[t];
        const StepModel model(spec, scenario.storage, grid_cells, coverage, closed_form);
        const BalanceSample draws(spec.generation, spec.demand, n, seed);

        for (double level : levels) {
            const OutcomeEstimate mc = draws.classify(BalanceQuery{level, scenario.storage});
            std::vector<std::pair<std::string, OutcomeProbabilities>> methods;
            if (model.has_closed_form()) methods.emplace_back("closed_form", model.primary(level));
            methods.emplace_back("grid", model.grid(level));

            for (const auto& [method, analytic] : methods) {
                const double slack = method == "grid" ? kGridTolerance : 0.0;
                const std::pair<const char*, std::pair<double, const ProbabilityEstimate*>> checks[] = {
                    {"p_A", {analytic.p_deficit, &mc.deficit}},
                    {"p_B", {analytic.p_overflow, &mc.overflow}},
                    {"p_self", {analytic.p_self, &mc.self}},
                };
                for (const auto& [quantity, pair] : checks) {
                    const auto& [value, estimate] = pair;
                    const double tolerance = estimate->gate_tolerance() + slack;
                    const bool pass = std::abs(value - estimate->p_hat) <= tolerance;
                    report.table.add_row({static_cast<std::int64_t>(t + 1), level, method,
                                          std::string(quantity), value, estimate->p_hat, tolerance,
                                          std::int64_t{pass ? 1 : 0}});
                    if (!pass && gated) {
                        std::ostringstream line;
                        line << std::setprecision(9) << "step " << t + 1 << " level " << level << ' '
                             << method << ' ' << quantity << ": analytic=" << value
                             << " mc=" << estimate->p_hat << " tolerance=" << tolerance;
                        report.failures.push_back(line.str());
                    }
                }
            }
        }
    }
    return report;
}

ExitCode run_command(const RunConfig& config, std::ostream& out, std::ostream& err,
                     ClosedForm closed_form) {
    try {
        if (config.scenario_path.empty()) throw ConfigError("missing --scenario");
        if (config.n < 1) throw ConfigError("--n must be >= 1");
        if (config.grid_cells < 2) throw ConfigError("--grid-cells must be >= 2");
        if (!(config.coverage > 0.5 && config.coverage < 1.0)) {
            throw ConfigError("--coverage must lie in (0.5, 1)");
        }

        Scenario scenario;
        try {
            scenario = load_scenario(config.scenario_path);
        } catch (const ScenarioError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }

        switch (config.command) {
        case Command::simulate: return run_simulate(scenario, config, out);
        case Command::analyze: return run_analyze(scenario, config, out, err);
        case Command::sweep: return run_sweep(scenario, config, out);
        case Command::validate: return run_validate(scenario, config, out, err, closed_form);
        }
        throw ConfigError("unknown command");
    } catch (const ScenarioError& e) {
        err << "scenario error: " << e.what() << "\n";
        return ExitCode::scenario_error;
    } catch (const GridError& e) {
        err << "numeric error: " << e.what() << "\n";
        return ExitCode::numeric_budget_exceeded;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::config_error;
    }
}

} // namespace gridstore
