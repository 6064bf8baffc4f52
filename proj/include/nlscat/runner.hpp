#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlscat/potential.hpp"
#include "nlscat/types.hpp"

namespace nlscat {

struct ConfigError : Error {
    using Error::Error;
};

enum class ExperimentKind { scattering, entropy, equivalence, evolution, symmetry_suite };

struct PotentialSpec {
    PotentialFamily family = PotentialFamily::zero;
    std::map<std::string, double> params;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::scattering;
    std::vector<PotentialSpec> potentials;  // one or more (sweeps)
    GridSpec grid;
    double lambda_radius = 40.0;
    double lambda_step = 0.02;
    std::vector<double> s_list{-1.0, -0.5, 0.0};
    std::vector<double> time_samples{0.0, 0.25, 0.5, 1.0};
    double dt = 5e-4;
    std::uint64_t seed = 0;
    std::string out_dir;  // may be empty; resolved at run time
    int threads = 1;

    nlohmann::json resolved() const;  // fully-defaulted config echo
};

struct RunManifest {
    std::string config_hash;  // FNV-1a 64 of the normalized config text
    std::string version;
    double wall_clock_sec = 0.0;
    std::vector<std::string> outputs;
    nlohmann::json diagnostics;
    nlohmann::json config_echo;
};

// Parse + validate. Collects every semantic violation before throwing a
// ConfigError whose message lists all of them; syntax errors carry the
// parser's location.
ExperimentConfig validate_config(const std::string& text);
ExperimentConfig validate_config_file(const std::string& path);

// Stable 64-bit FNV-1a digest of the normalized (resolved, sorted-key) form.
std::string config_hash(const ExperimentConfig& config);

// Execute the configured pipeline and write all reports plus manifest.json
// into out_dir. Numeric outputs are byte-identical across reruns of the same
// config and seed.
RunManifest run_experiment(const ExperimentConfig& config, const std::string& out_dir);

std::string kind_to_string(ExperimentKind kind);

}  // namespace nlscat
