#include "bciov/commands.hpp"
#include "bciov/energy_model.hpp"
#include "bciov/quadrature.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

int main(int argc, char** argv)
{
    using namespace bciov;

    CLI::App app{"Clustered vehicular ledger analytics and simulation"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    std::string variant;
    CommandOptions opts;

    auto add_scenario_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", config, "Scenario JSON file")->required();
        cmd->add_option("--out", out, "Output directory (default: scenario output)");
        cmd->add_option("--seed", seed, "Override the scenario seed");
        cmd->add_option("--variant", variant, "Formula variant")->check(CLI::IsMember({"as-printed", "as-derived"}));
        cmd->add_option("--jobs", opts.jobs, "Parallel sweep points (0: all cores)");
    };

    CLI::App* analytics = app.add_subcommand("analytics", "Closed forms next to their quadrature oracles");
    add_scenario_flags(analytics);
    CLI::App* simulate = app.add_subcommand("simulate", "Paired baseline/clustered runs per sweep point");
    add_scenario_flags(simulate);
    CLI::App* validate = app.add_subcommand("validate", "Oracle suite; nonzero exit on failure");
    validate->add_option("--tolerance", opts.tolerance, "Relative/absolute tolerance of the checks");
    validate->add_option("--grid", opts.grid, "Cases per check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    try {
        if (validate->parsed()) return cmd_validate(opts, std::cout);

        CLI::App* cmd = analytics->parsed() ? analytics : simulate;
        if (!out.empty()) opts.out = std::filesystem::path(out);
        if (cmd->count("--seed") > 0) opts.seed = seed;
        if (!variant.empty()) opts.variant = parse_formula_variant(variant);
        const Scenario scenario = with_overrides(load_scenario(config), opts);
        return analytics->parsed() ? cmd_analytics(scenario, opts, std::cout)
                                   : cmd_simulate(scenario, opts, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return exit_io;
    } catch (const QuadratureError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return exit_validation;
    }
}
