// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "swarmkit/swarmkit.h"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int default_workers() {
    if (const char* env = std::getenv("SWARMKIT_WORKERS")) {
        try {
            return std::stoi(env);
        } catch (...) {
            std::cerr << "swarmkit: ignoring bad SWARMKIT_WORKERS='" << env << "'\n";
        }
    }
    return 0;
}

int report(swarmkit_status st) {
    if (st == SWARMKIT_OK) return 0;
    std::cerr << "swarmkit: error " << static_cast<int>(st) << ": " << swarmkit_last_error() << '\n';
    return 1 + static_cast<int>(st);
}

struct RunArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    int workers = 0;
};

int run_config(const RunArgs& a, bool require_sweep) {
    const std::string text = slurp(a.config);
    if (require_sweep) {
        char* norm = nullptr;
        if (auto st = swarmkit_config_normalize(text.c_str(), &norm); st != SWARMKIT_OK) return report(st);
        const bool sweep = std::string(norm).find("\"kind\": \"particle_sweep\"") != std::string::npos;
        swarmkit_string_free(norm);
        if (!sweep) {
            std::cerr << "swarmkit: sweep needs a config with kind particle_sweep\n";
            return 2;
        }
    }
    char* manifest = nullptr;
    const auto st = swarmkit_experiment_run(text.c_str(), a.out.empty() ? nullptr : a.out.c_str(),
                                            a.seed.value_or(0), a.seed.has_value() ? 1 : 0, a.workers, &manifest);
    if (st != SWARMKIT_OK) return report(st);
    std::cout << manifest << '\n';
    swarmkit_string_free(manifest);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"swarmkit: particle swarm and mean-field optimization experiments"};
    app.set_version_flag("--version", std::string(swarmkit_version()));
    app.require_subcommand(1);

    RunArgs run_args, sweep_args;
    run_args.workers = sweep_args.workers = default_workers();
    auto add_run_options = [](CLI::App* sub, RunArgs& a) {
        sub->add_option("config", a.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", a.out, "output directory (overrides the config)");
        sub->add_option("--seed", a.seed, "master seed (overrides the config)");
        sub->add_option("--workers", a.workers, "worker threads (default: SWARMKIT_WORKERS or config)")
            ->check(CLI::NonNegativeNumber);
    };
    auto* run = app.add_subcommand("run", "run any experiment config");
    add_run_options(run, run_args);
    auto* sweep = app.add_subcommand("sweep", "run a particle_sweep config and write the table");
    add_run_options(sweep, sweep_args);

    std::string norm_path;
    auto* normalize = app.add_subcommand("normalize", "print the config with every default filled in");
    normalize->add_option("config", norm_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);

    std::string snap_path, cols_path;
    auto* columns = app.add_subcommand("columns", "convert a density snapshot to plot columns");
    columns->add_option("snapshot", snap_path, "density .csv or .bin")->required()->check(CLI::ExistingFile);
    columns->add_option("output", cols_path, "column file to write")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return run_config(run_args, false);
        if (*sweep) return run_config(sweep_args, true);
        if (*normalize) {
            char* out = nullptr;
            const std::string text = slurp(norm_path);
            if (auto st = swarmkit_config_normalize(text.c_str(), &out); st != SWARMKIT_OK) return report(st);
            std::cout << out << '\n';
            swarmkit_string_free(out);
            return 0;
        }
        if (*columns) {
            swarmkit_density* d = nullptr;
            if (auto st = swarmkit_density_load(snap_path.c_str(), &d); st != SWARMKIT_OK) return report(st);
            const auto st = swarmkit_density_write_columns(d, cols_path.c_str());
            double mass = 0.0;
            swarmkit_density_mass(d, &mass);
            swarmkit_density_destroy(d);
            if (st != SWARMKIT_OK) return report(st);
            std::printf("wrote %s (mass %.12g)\n", cols_path.c_str(), mass);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "swarmkit: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
