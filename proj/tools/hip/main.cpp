#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "hip/commands.hpp"
#include "hip/config.hpp"

int main(int argc, char** argv) {
    using namespace hip::cli;
    CLI::App app{"hip: forward solves, diagnostics and reconstruction for F(sigma) = sigma |grad u|^p"};
    app.require_subcommand(1, 1);
    std::string config_path;
    std::string out_dir;
    for (const char* name :
         {"forward", "verify", "reconstruct", "sweep-linear", "sweep-nonlinear", "plan"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "key=value experiment file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the out key)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    ExperimentConfig config;
    try {
        config = load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << error_name(e) << ": " << e.what() << '\n';
        return exit_config;
    }
    if (!out_dir.empty()) config.out = out_dir;
    return run_command(app.get_subcommands().front()->get_name(), config, std::cout, std::cerr);
}
