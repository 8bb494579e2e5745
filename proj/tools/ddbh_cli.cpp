#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ddbh/runner.hpp"

namespace {

int default_workers() {
    if (const char* env = std::getenv("DDBH_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
        std::cerr << "ignoring invalid DDBH_WORKERS=" << env << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven-dissipative Bose-Hubbard cavity array: steady states, spectra and response"};
    app.require_subcommand(1);
    app.set_version_flag("--version", DDBH_VERSION);

    std::string config_path, out_dir;
    int workers = 0;
    bool verbose = false;
    const std::pair<const char*, ddbh::Task> commands[] = {
        {"ness", ddbh::Task::Ness},
        {"phase-diagram", ddbh::Task::PhaseDiagram},
        {"spectrum", ddbh::Task::Spectrum},
        {"response", ddbh::Task::Response},
        {"equilibrium", ddbh::Task::Equilibrium},
    };
    for (const auto& [name, task] : commands) {
        CLI::App* sub = app.add_subcommand(name, std::string("Run the ") + ddbh::task_name(task) + " task");
        sub->add_option("--config", config_path, "YAML run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory (overrides the config)");
        sub->add_option("--workers", workers, "Worker threads (overrides DDBH_WORKERS and the config)")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--verbose", verbose, "Progress messages on stderr");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    ddbh::Task task{};
    for (const auto& [name, t] : commands)
        if (app.got_subcommand(name)) task = t;

    ddbh::RunConfig cfg;
    try {
        cfg = ddbh::load_config(config_path);
        if (cfg.task != task)
            throw ddbh::ConfigError(std::string("config task is '") + ddbh::task_name(cfg.task) +
                                    "' but the subcommand asks for '" + ddbh::task_name(task) + "'");
    } catch (const ddbh::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (!out_dir.empty()) cfg.output = out_dir;
    if (workers > 0) cfg.workers = workers;
    else if (const int env = default_workers(); env > 0) cfg.workers = env;

    ddbh::Logger log;
    if (verbose) log = [](const std::string& s) { std::cerr << s << "\n"; };
    try {
        const ddbh::RunResult r = ddbh::run(cfg, log);
        if (verbose) std::cerr << r.points - r.failed << "/" << r.points << " points ok, manifest " << r.manifest << "\n";
        if (r.failed > 0) {
            std::cerr << r.failed << " of " << r.points << " points failed; see " << r.manifest << "\n";
            return 1;
        }
    } catch (const ddbh::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
