#include <iostream>

#include "CLI11.hpp"
#include "tdbc/cli.hpp"

int main(int argc, char** argv) {
    tdbc::cli::RunOptions opts;
    CLI::App app{"Moving-wall quantum box: theta-function solutions and their verification"};
    std::string config;
    std::string out_dir = ".";
    app.add_option("command", opts.command, "Command to run")
        ->required()
        ->check(CLI::IsMember(tdbc::cli::command_names()));
    app.add_option("--config", config, "Scenario file (dotted key=value)");
    app.add_option("--out", out_dir, "Output directory for CSV and plot scripts");
    app.add_option("--seed", opts.seed, "Seed for randomized sweeps");
    app.add_flag("--strict", opts.strict, "Treat warnings as threshold violations (exit 3)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : tdbc::cli::kExitConfig;
    }
    if (!config.empty()) opts.config_path = config;
    opts.out_dir = out_dir;
    return tdbc::cli::run(opts, std::cout, std::cerr);
}
