#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aoivoi/commands.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    double beta = 0.0;
    bool beta_set = false;
    std::string beta_grid;
    std::uint64_t epochs = 0;
    bool epochs_set = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string phi_variant;
    std::string output;
    std::string format;
};

void add_common(CLI::App* cmd, CliArgs& args) {
    cmd->add_option("--config", args.config_path, "Path to the JSON config document")
        ->required();
    cmd->add_option("--beta", args.beta, "Override the AoI/VoI weight")
        ->check(CLI::Range(0.0, 1.0))
        ->each([&args](const std::string&) { args.beta_set = true; });
    cmd->add_option("--beta-grid", args.beta_grid, "Weight grid as start:stop:count");
    cmd->add_option("--epochs", args.epochs, "Monte Carlo epoch count")
        ->each([&args](const std::string&) { args.epochs_set = true; });
    cmd->add_option("--seed", args.seed, "Monte Carlo seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--phi-variant", args.phi_variant,
                    "Value decay factor variant: mixture, per-class, or both (validate only)")
        ->check(CLI::IsMember({"mixture", "per-class", "per_class", "both"}));
    cmd->add_option("--output", args.output, "Write the report to a file instead of stdout");
    cmd->add_option("--format", args.format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "structured"}));
}

int apply_overrides(aoivoi::RunConfig& cfg, const CliArgs& args) {
    if (args.beta_set)
        cfg.beta = args.beta;
    if (!args.beta_grid.empty())
        cfg.beta_grid = aoivoi::parse_beta_grid(args.beta_grid);
    if (args.epochs_set)
        cfg.epochs = args.epochs;
    if (args.seed_set)
        cfg.seed = args.seed;
    if (!args.phi_variant.empty()) {
        if (args.phi_variant == "mixture") {
            cfg.phi_variant = aoivoi::PhiVariant::mixture;
        } else if (args.phi_variant == "per-class" || args.phi_variant == "per_class") {
            cfg.phi_variant = aoivoi::PhiVariant::per_class;
        } else {
            cfg.phi_both = true;
        }
    }
    if (!args.output.empty())
        cfg.output = args.output;
    if (!args.format.empty()) {
        if (args.format == "text")
            cfg.format = aoivoi::OutputFormat::text;
        else if (args.format == "csv")
            cfg.format = aoivoi::OutputFormat::csv;
        else
            cfg.format = aoivoi::OutputFormat::structured;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal threshold waiting policies for a blocking update system:\n"
                 "minimizes a weighted combination of age and (negative) value of\n"
                 "information and cross-checks the closed forms by simulation."};
    app.require_subcommand(1);

    CliArgs args;
    CLI::App* cmd_solve = app.add_subcommand("solve", "Solve for one weight");
    CLI::App* cmd_frontier =
        app.add_subcommand("frontier", "Sweep weights and emit the tradeoff curve as CSV");
    CLI::App* cmd_simulate =
        app.add_subcommand("simulate", "Solve, then estimate AoI/VoI by Monte Carlo");
    CLI::App* cmd_validate =
        app.add_subcommand("validate", "Solve, simulate, and compare against closed forms");
    for (CLI::App* cmd : {cmd_solve, cmd_frontier, cmd_simulate, cmd_validate})
        add_common(cmd, args);

    CLI11_PARSE(app, argc, argv);

    try {
        aoivoi::RunConfig cfg = aoivoi::load_config(args.config_path);
        apply_overrides(cfg, args);
        if (cfg.phi_both && !cmd_validate->parsed()) {
            std::cerr << "--phi-variant both is only supported by validate\n";
            return aoivoi::kExitConfigError;
        }
        if (cmd_solve->parsed())
            return aoivoi::run_solve(cfg, std::cout, std::cerr);
        if (cmd_frontier->parsed())
            return aoivoi::run_frontier(cfg, std::cout, std::cerr);
        if (cmd_simulate->parsed())
            return aoivoi::run_simulate(cfg, std::cout, std::cerr);
        return aoivoi::run_validate(cfg, std::cout, std::cerr);
    } catch (const aoivoi::SpecError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return aoivoi::kExitConfigError;
    } catch (const aoivoi::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return aoivoi::kExitSolverError;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return aoivoi::kExitSolverError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return aoivoi::kExitConfigError;
    }
}
