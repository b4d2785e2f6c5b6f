// orbitpool: group-orbit pooling experiments on plane images.
//
// usage:
//   orbitpool run <config.json> [--out DIR] [--seed N] [--quiet]
//   orbitpool validate <config.json>
//
// exit codes: 0 all bound checks pass, 1 config or runtime error,
// 2 a bound check failed beyond its tolerance.
// ORBITPOOL_THREADS caps the worker count (default: machine parallelism).

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "orbitpool/experiment.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& out_override,
                long long seed_override, bool has_seed, bool quiet) {
    orbitpool::ExperimentConfig cfg;
    try {
        cfg = orbitpool::parse_config_file(config_path);
    } catch (const orbitpool::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (has_seed) cfg.seed = static_cast<std::uint64_t>(seed_override);

    try {
        orbitpool::RunResult result = orbitpool::run_experiment(cfg);
        if (result.status == orbitpool::RunStatus::bound_violation) {
            std::fprintf(stderr, "bound violation: %s\n", result.detail.c_str());
            return 2;
        }
        if (!quiet)
            std::printf("%s: all checks passed, outputs in %s\n", cfg.experiment.c_str(),
                        cfg.output_dir.c_str());
        return 0;
    } catch (const orbitpool::InvalidArgument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const orbitpool::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

int validate_command(const std::string& config_path) {
    try {
        orbitpool::ExperimentConfig cfg = orbitpool::parse_config_file(config_path);
        std::printf("ok: %s (seed %llu, output %s)\n", cfg.experiment.c_str(),
                    static_cast<unsigned long long>(cfg.seed), cfg.output_dir.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"group-orbit pooling experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    long long seed_override = 0;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    run->add_option("--out", out_override, "override the output directory");
    CLI::Option* seed_opt = run->add_option("--seed", seed_override, "override the master seed");
    run->add_flag("--quiet", quiet, "suppress the success line");

    CLI::App* validate = app.add_subcommand("validate", "validate a config and exit");
    validate->add_option("config", config_path, "experiment config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand(validate)) return validate_command(config_path);
    return run_command(config_path, out_override, seed_override, seed_opt->count() > 0, quiet);
}
