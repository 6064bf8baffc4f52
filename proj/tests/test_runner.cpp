#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "nlscat/runner.hpp"

using namespace nlscat;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

const char* kScatterConfig = R"({
  "kind": "scattering",
  "potential": {"family": "gaussian", "params": {"amp": 0.5, "width": 0.4}},
  "grid": {"dx": 0.01, "xi0": -10.24, "n": 2048},
  "lambda_grid": {"radius": 2.0, "step": 0.1},
  "threads": 2
})";

}  // namespace

TEST_CASE("minimal config validates and echoes every default") {
    const ExperimentConfig cfg = validate_config(kScatterConfig);
    CHECK(cfg.kind == ExperimentKind::scattering);
    CHECK(cfg.lambda_radius == 2.0);
    CHECK(cfg.dt == 5e-4);  // defaulted
    const nlohmann::json echo = cfg.resolved();
    CHECK(echo["time"]["dt"] == 5e-4);
    CHECK(echo["s_list"].size() == 3);
    CHECK(echo["seed"] == 0);
    CHECK(echo["kind"] == "scattering");
}

TEST_CASE("validation reports every problem at once") {
    const std::string bad = R"({
      "kind": "sideways",
      "potentials": [{"family": "gaussian"}],
      "grid": {"dx": -0.01, "n": 1},
      "lambda_grid": {"radius": -3.0},
      "time": {"dt": 0.0, "samples": [0.5, 0.25]},
      "threads": 0
    })";
    try {
        validate_config(bad);
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("unknown experiment kind") != std::string::npos);
        CHECK(msg.find("grid.dx") != std::string::npos);
        CHECK(msg.find("grid.n") != std::string::npos);
        CHECK(msg.find("radius") != std::string::npos);
        CHECK(msg.find("time.dt") != std::string::npos);
        CHECK(msg.find("strictly increasing") != std::string::npos);
        CHECK(msg.find("threads") != std::string::npos);
    }
}

TEST_CASE("syntax errors and missing files surface as ConfigError") {
    CHECK_THROWS_AS(validate_config("{ not json"), ConfigError);
    CHECK_THROWS_AS(validate_config("{}"), ConfigError);
    CHECK_THROWS_AS(validate_config_file("/nonexistent/config.json"), ConfigError);
    const std::string bad_s = R"({"kind": "evolution",
      "potential": {"family": "zero"}, "s_list": [0.75]})";
    CHECK_THROWS_AS(validate_config(bad_s), ConfigError);
}

TEST_CASE("config hashes are stable 16-digit hex and content sensitive") {
    const ExperimentConfig a = validate_config(kScatterConfig);
    const std::string h1 = config_hash(a);
    const std::string h2 = config_hash(a);
    CHECK(h1 == h2);
    CHECK(h1.size() == 16);
    CHECK(h1.find_first_not_of("0123456789abcdef") == std::string::npos);
    ExperimentConfig b = a;
    b.seed = 1;
    CHECK(config_hash(b) != h1);
}

TEST_CASE("identical configs produce byte-identical numeric outputs") {
    const ExperimentConfig cfg = validate_config(kScatterConfig);
    const fs::path d1 = fresh_dir("nlscat_run_a");
    const fs::path d2 = fresh_dir("nlscat_run_b");
    const RunManifest m1 = run_experiment(cfg, d1.string());
    const RunManifest m2 = run_experiment(cfg, d2.string());
    CHECK(m1.config_hash == m2.config_hash);
    REQUIRE(m1.outputs == m2.outputs);
    for (const std::string& name : m1.outputs) {
        if (name == "manifest.json") continue;  // contains wall-clock timing
        CHECK(read_file(d1 / name) == read_file(d2 / name));
    }
    // the manifest itself exists and lists itself
    const nlohmann::json manifest = nlohmann::json::parse(read_file(d1 / "manifest.json"));
    CHECK(manifest["config_hash"] == m1.config_hash);
    CHECK(manifest["outputs"].size() == m1.outputs.size());
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("the seed steers random potentials into different outputs") {
    const char* tmpl = R"({
      "kind": "scattering",
      "potential": {"family": "random_bandlimited",
                    "params": {"amp": 0.3, "cutoff": 3.0, "envelope_width": 2.0}},
      "grid": {"dx": 0.01, "xi0": -10.24, "n": 2048},
      "lambda_grid": {"radius": 1.0, "step": 0.25},
      "seed": %SEED%
    })";
    auto with_seed = [&](const std::string& seed) {
        std::string s = tmpl;
        s.replace(s.find("%SEED%"), 6, seed);
        return validate_config(s);
    };
    const fs::path d1 = fresh_dir("nlscat_seed_1");
    const fs::path d2 = fresh_dir("nlscat_seed_2");
    run_experiment(with_seed("7"), d1.string());
    run_experiment(with_seed("8"), d2.string());
    CHECK(read_file(d1 / "potential.csv") != read_file(d2 / "potential.csv"));
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("the evolution pipeline writes its reports and drift diagnostics") {
    const char* cfg_text = R"({
      "kind": "evolution",
      "potential": {"family": "gaussian", "params": {"amp": 0.5, "width": 0.12}},
      "grid": {"dx": 0.02, "xi0": -10.24, "n": 1024},
      "time": {"dt": 0.001, "samples": [0.0, 0.02]},
      "s_list": [-1.0, 0.0]
    })";
    const ExperimentConfig cfg = validate_config(cfg_text);
    const fs::path dir = fresh_dir("nlscat_evolution");
    const RunManifest m = run_experiment(cfg, dir.string());
    CHECK(fs::exists(dir / "evolution.csv"));
    CHECK(fs::exists(dir / "final_snapshot.csv"));
    CHECK(m.diagnostics["l2_relative_drift"].get<double>() < 1e-8);
    CHECK(m.diagnostics["log_a_i_drift"].get<double>() < 1e-2);
    fs::remove_all(dir);
}

TEST_CASE("the equivalence pipeline emits the summary table") {
    const char* cfg_text = R"({
      "kind": "equivalence",
      "potentials": [{"family": "gaussian", "params": {"amp": 0.5, "width": 0.5}},
                     {"family": "box", "params": {"amp": 0.4, "left": 0.0, "right": 2.0}}],
      "grid": {"dx": 0.01, "xi0": -10.24, "n": 2048}
    })";
    const ExperimentConfig cfg = validate_config(cfg_text);
    const fs::path dir = fresh_dir("nlscat_equivalence");
    const RunManifest m = run_experiment(cfg, dir.string());
    const std::string summary = read_file(dir / "equivalence_summary.csv");
    CHECK(summary.find("ratio_smoothing") != std::string::npos);
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 3);  // header + 2 rows
    CHECK(m.diagnostics["max_smoothing_route_deviation"].get<double>() < 1e-3);
    fs::remove_all(dir);
}
