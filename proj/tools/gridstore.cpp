// gridstore: storage self-sufficiency analysis from the command line.
//
//   gridstore simulate --scenario day24.json --n 10000 --out day.csv
//   gridstore analyze  --scenario fig2.json --s-prev 0
//   gridstore sweep    --scenario fig2.json --n 1000000 --out sweep.csv
//   gridstore validate --scenario fig2.json --n 1000000 --seed 7

#include "gridstore/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace gridstore;

namespace {

void add_common_options(CLI::App& cmd, RunConfig& config, std::string& format) {
    cmd.add_option("--scenario", config.scenario_path, "Scenario document (JSON)");
    cmd.add_option("--seed", config.seed, "Random seed")->capture_default_str();
    cmd.add_option("--n", config.n, "Monte Carlo sample / trajectory count")->capture_default_str();
    cmd.add_option("--out", config.output_path, "Result file (default: standard output)");
    cmd.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd.add_option("--grid-cells", config.grid_cells, "Cells per discretized distribution")
        ->capture_default_str();
    cmd.add_option("--coverage", config.coverage, "Central probability covered by each grid")
        ->capture_default_str();
    cmd.add_option("--step", config.step, "1-based step to analyze (default: all)");
}

void add_levels_option(CLI::App& cmd, RunConfig& config) {
    cmd.add_option("--levels", config.levels, "Comma-separated storage levels")->delimiter(',');
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Storage self-sufficiency analysis for generation/demand/storage systems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    RunConfig config;
    std::string format = "csv";

    auto* simulate = app.add_subcommand("simulate", "Seeded realization plus ensemble statistics");
    add_common_options(*simulate, config, format);

    auto* analyze = app.add_subcommand("analyze", "Analytic deficit/overflow/self-sufficiency probabilities");
    add_common_options(*analyze, config, format);
    analyze->add_option("--s-prev", config.s_prev, "Storage level before the step");

    auto* sweep = app.add_subcommand("sweep", "Analytic and Monte Carlo probabilities across battery levels");
    add_common_options(*sweep, config, format);
    add_levels_option(*sweep, config);

    auto* validate = app.add_subcommand("validate", "Gate analytic results against Monte Carlo");
    add_common_options(*validate, config, format);
    add_levels_option(*validate, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::config_error);
    }

    if (simulate->parsed()) config.command = Command::simulate;
    if (analyze->parsed()) config.command = Command::analyze;
    if (sweep->parsed()) config.command = Command::sweep;
    if (validate->parsed()) config.command = Command::validate;
    config.format = parse_format(format);

    return static_cast<int>(run_command(config, std::cout, std::cerr));
}
