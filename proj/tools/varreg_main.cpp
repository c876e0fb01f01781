// Command-line front end: solve, diagnose, recover, mollify, example36, selftest.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "varreg/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"variational regularity workbench"};
    app.require_subcommand(1);

    std::string config_path;
    varreg::RunOptions opt;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", config_path, "configuration file");
        if (needs_config) c->required();
        sub->add_option("--out", opt.out_dir, "output directory (overrides config)");
        sub->add_flag("--svg", opt.svg, "also emit SVG plots");
        sub->add_option("--grid", opt.grid_override, "report grid size (odd, >= 257)");
    };

    const char* commands[] = {"solve", "diagnose", "recover", "mollify", "example36"};
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        add_common(sub, true);
        if (std::string(name) == "example36")
            sub->add_option("--n", opt.example36_n, "derivative order n of the example");
    }
    app.add_subcommand("selftest", "run the built-in analytic oracles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // bad invocation is a configuration error
    }

    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "selftest") return varreg::run_selftest();

    varreg::RunConfig cfg;
    try {
        cfg = varreg::parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return varreg::run_command(command, cfg, opt);
}
