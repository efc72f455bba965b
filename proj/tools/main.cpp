// starnet — command-line front end
//
//   starnet <modes|sweep|evolve|oracle> --config run.ini [--out DIR]

#include "config.hpp"
#include "run.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace starnet::cli;

    CLI::App app{"Star-network normal modes, squeezing sweeps and open-system dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    for (const char* name : {"modes", "sweep", "evolve", "oracle"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("-c,--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--out", out_dir, "output directory (overrides output.directory)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const Command command = *parse_command(app.get_subcommands().front()->get_name());
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const starnet::Error& e) {
        std::cerr << "error [" << starnet::to_string(e.code()) << "]: " << e.what() << '\n';
        return config_failure(command, e, out_dir).exit_code;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;

    const RunOutcome outcome = run(command, cfg, cfg.out_dir);
    if (outcome.exit_code != 0) {
        const auto& err = outcome.report["error"];
        std::cerr << "error [" << err["code"].get<std::string>() << "]: " << err["message"].get<std::string>() << '\n';
    }
    for (const auto& p : outcome.artifacts) std::cout << p.string() << '\n';
    return outcome.exit_code;
}
