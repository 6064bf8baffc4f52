#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nlscat/runner.hpp"

namespace {

// flag > environment > config > current directory
std::string resolve_out_dir(const std::string& flag_value, const std::string& config_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("NLSCAT_OUT_DIR"); env && *env) return env;
    if (!config_value.empty()) return config_value;
    return ".";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirac scattering, entropy functionals, and NLS evolution"};
    app.require_subcommand(1);

    std::string run_config, run_out;
    int run_threads = 0;
    long long run_seed = -1;
    auto* run = app.add_subcommand("run", "execute an experiment config");
    run->add_option("config", run_config, "path to the JSON config")->required();
    run->add_option("--out", run_out, "output directory (overrides env and config)");
    run->add_option("--threads", run_threads, "worker threads for lambda sweeps");
    run->add_option("--seed", run_seed, "override the config seed");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "validate a config and echo defaults");
    validate->add_option("config", validate_path, "path to the JSON config")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            const nlscat::ExperimentConfig cfg = nlscat::validate_config_file(validate_path);
            std::cout << cfg.resolved().dump(2) << "\n";
            return 0;
        }
        nlscat::ExperimentConfig cfg;
        try {
            cfg = nlscat::validate_config_file(run_config);
        } catch (const nlscat::Error&) {
            throw;  // handled below with exit code 2/3 split
        }
        if (run_threads > 0) cfg.threads = run_threads;
        if (run_seed >= 0) cfg.seed = static_cast<std::uint64_t>(run_seed);
        const std::string out = resolve_out_dir(run_out, cfg.out_dir);
        const nlscat::RunManifest manifest = nlscat::run_experiment(cfg, out);
        std::cout << "wrote " << manifest.outputs.size() << " file(s) to " << out
                  << " (config " << manifest.config_hash << ")\n";
        return 0;
    } catch (const nlscat::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlscat::ParamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
