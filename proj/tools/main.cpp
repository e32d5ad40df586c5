#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aabc/cli.hpp"

namespace {

struct CommandArgs {
    std::string config_path;
    aabc::cli::Overrides overrides;
};

void add_common_options(CLI::App* cmd, CommandArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file (or a manifest from a previous run)")
        ->required();
    cmd->add_option("--seed", [&args](const CLI::results_t& res) {
        args.overrides.seed = std::stoull(res[0]);
        return true;
    }, "Root seed override");
    cmd->add_option("--out", [&args](const CLI::results_t& res) {
        args.overrides.out = res[0];
        return true;
    }, "Output directory override");
    cmd->add_option("--workers", [&args](const CLI::results_t& res) {
        args.overrides.workers = std::stoi(res[0]);
        return true;
    }, "Worker thread count override");
}

int run_with_config(const CommandArgs& args, int (*fn)(const nlohmann::json&, std::ostream&)) {
    return aabc::cli::guarded(
        [&]() {
            const auto config =
                aabc::cli::apply_overrides(aabc::cli::load_config(args.config_path), args.overrides);
            return fn(config, std::cerr);
        },
        std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Likelihood-free Bayesian inference by rejection-sampling ABC and AABC"};
    app.require_subcommand(1);

    CommandArgs build_args;
    auto* build = app.add_subcommand("build-pool", "Simulate and store a realization pool");
    add_common_options(build, build_args);

    CommandArgs infer_args;
    auto* infer = app.add_subcommand("infer", "Sample a posterior with abc, aabc, or aabc_param_only");
    add_common_options(infer, infer_args);

    CommandArgs study_args;
    auto* study = app.add_subcommand("study", "Run a replicate accuracy study over a pool-size grid");
    add_common_options(study, study_args);

    std::string plot_input, plot_out;
    int plot_bins = 40;
    auto* plot = app.add_subcommand("export-plotdata", "Reshape a posterior or report CSV for plotting");
    plot->add_option("--input", plot_input, "posterior.csv or report.csv")->required();
    plot->add_option("--out", plot_out, "Output CSV file")->required();
    plot->add_option("--bins", plot_bins, "Histogram bins per component");

    CLI11_PARSE(app, argc, argv);

    if (build->parsed()) {
        return run_with_config(build_args, &aabc::cli::run_build_pool);
    }
    if (infer->parsed()) {
        return run_with_config(infer_args, &aabc::cli::run_infer);
    }
    if (study->parsed()) {
        return run_with_config(study_args, &aabc::cli::run_study);
    }
    if (plot->parsed()) {
        return aabc::cli::guarded(
            [&]() { return aabc::cli::run_export_plotdata(plot_input, plot_out, plot_bins, std::cerr); },
            std::cerr);
    }
    return 1;
}
