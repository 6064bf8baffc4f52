#include "nlscat/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlscat/entropy.hpp"
#include "nlscat/nls.hpp"
#include "nlscat/oscillation.hpp"
#include "nlscat/scattering.hpp"

namespace nlscat {

namespace {

constexpr const char* kVersion = "0.1.0";

ExperimentKind kind_from_string(const std::string& s) {
    if (s == "scattering") return ExperimentKind::scattering;
    if (s == "entropy") return ExperimentKind::entropy;
    if (s == "equivalence") return ExperimentKind::equivalence;
    if (s == "evolution") return ExperimentKind::evolution;
    if (s == "symmetry-suite") return ExperimentKind::symmetry_suite;
    throw ConfigError("unknown experiment kind: " + s);
}

}  // namespace

std::string kind_to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::scattering: return "scattering";
        case ExperimentKind::entropy: return "entropy";
        case ExperimentKind::equivalence: return "equivalence";
        case ExperimentKind::evolution: return "evolution";
        case ExperimentKind::symmetry_suite: return "symmetry-suite";
    }
    throw ConfigError("bad experiment kind");
}

nlohmann::json ExperimentConfig::resolved() const {
    nlohmann::json j;
    j["kind"] = kind_to_string(kind);
    nlohmann::json pots = nlohmann::json::array();
    for (const auto& p : potentials) {
        nlohmann::json e;
        e["family"] = family_to_string(p.family);
        e["params"] = p.params;  // std::map keeps keys sorted
        pots.push_back(e);
    }
    j["potentials"] = pots;
    j["grid"] = {{"dx", grid.dx}, {"xi0", grid.xi0}, {"n", grid.n}};
    j["lambda_grid"] = {{"radius", lambda_radius}, {"step", lambda_step}};
    j["s_list"] = s_list;
    j["time"] = {{"samples", time_samples}, {"dt", dt}};
    j["seed"] = seed;
    j["threads"] = threads;
    if (!out_dir.empty()) j["out_dir"] = out_dir;
    return j;
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string text = config.resolved().dump();
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig validate_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config syntax error: ") + e.what());
    }

    std::vector<std::string> errors;
    ExperimentConfig cfg;

    if (!j.contains("kind") || !j["kind"].is_string()) {
        errors.push_back("missing experiment kind (expected one of scattering, entropy, "
                         "equivalence, evolution, symmetry-suite)");
    } else {
        try {
            cfg.kind = kind_from_string(j["kind"].get<std::string>());
        } catch (const ConfigError& e) {
            errors.push_back(e.what());
        }
    }

    auto parse_potential = [&](const nlohmann::json& p, const std::string& where) {
        PotentialSpec spec;
        if (!p.contains("family") || !p["family"].is_string()) {
            errors.push_back(where + ": missing potential family");
            return spec;
        }
        try {
            spec.family = family_from_string(p["family"].get<std::string>());
        } catch (const ParamError& e) {
            errors.push_back(where + ": " + e.what());
        }
        if (p.contains("params")) {
            if (!p["params"].is_object()) {
                errors.push_back(where + ": params must be an object of numbers");
            } else {
                for (auto it = p["params"].begin(); it != p["params"].end(); ++it) {
                    if (!it.value().is_number())
                        errors.push_back(where + ": parameter " + it.key() +
                                         " is not a number");
                    else
                        spec.params[it.key()] = it.value().get<double>();
                }
            }
        }
        return spec;
    };

    if (j.contains("potentials")) {
        if (!j["potentials"].is_array() || j["potentials"].empty()) {
            errors.push_back("potentials must be a non-empty array");
        } else {
            for (std::size_t k = 0; k < j["potentials"].size(); ++k)
                cfg.potentials.push_back(
                    parse_potential(j["potentials"][k], "potentials[" + std::to_string(k) + "]"));
        }
    } else if (j.contains("potential")) {
        cfg.potentials.push_back(parse_potential(j["potential"], "potential"));
    } else {
        errors.push_back("missing potential (or potentials) entry");
    }

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (g.contains("dx")) cfg.grid.dx = g["dx"].get<double>();
        if (g.contains("xi0")) cfg.grid.xi0 = g["xi0"].get<double>();
        if (g.contains("n")) cfg.grid.n = g["n"].get<std::size_t>();
        if (!(cfg.grid.dx > 0.0)) errors.push_back("grid.dx must be positive");
        if (cfg.grid.n < 2) errors.push_back("grid.n must be at least 2");
    }

    if (j.contains("lambda_grid")) {
        const auto& g = j["lambda_grid"];
        if (g.contains("radius")) cfg.lambda_radius = g["radius"].get<double>();
        if (g.contains("step")) cfg.lambda_step = g["step"].get<double>();
        if (!(cfg.lambda_radius > 0.0)) errors.push_back("lambda_grid.radius must be positive");
        if (!(cfg.lambda_step > 0.0)) errors.push_back("lambda_grid.step must be positive");
    }

    if (j.contains("s_list")) {
        if (!j["s_list"].is_array()) {
            errors.push_back("s_list must be an array of numbers");
        } else {
            cfg.s_list.clear();
            for (const auto& v : j["s_list"]) {
                const double s = v.get<double>();
                if (!(s >= -1.0 && s < 0.5))
                    errors.push_back("s_list value " + std::to_string(s) +
                                     " outside the supported range [-1, 1/2)");
                cfg.s_list.push_back(s);
            }
        }
    }

    if (j.contains("time")) {
        const auto& t = j["time"];
        if (t.contains("dt")) cfg.dt = t["dt"].get<double>();
        if (t.contains("samples")) {
            cfg.time_samples.clear();
            for (const auto& v : t["samples"]) cfg.time_samples.push_back(v.get<double>());
            for (std::size_t k = 0; k + 1 < cfg.time_samples.size(); ++k)
                if (!(cfg.time_samples[k] < cfg.time_samples[k + 1])) {
                    errors.push_back("time.samples must be strictly increasing");
                    break;
                }
        }
        if (!(cfg.dt > 0.0)) errors.push_back("time.dt must be positive");
    }

    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) {
        cfg.threads = j["threads"].get<int>();
        if (cfg.threads < 1) errors.push_back("threads must be >= 1");
    }
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();

    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "config validation failed with " << errors.size() << " error(s):";
        for (const auto& e : errors) msg << "\n  - " << e;
        throw ConfigError(msg.str());
    }
    return cfg;
}

ExperimentConfig validate_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return validate_config(ss.str());
}

namespace {

struct OutputSink {
    std::filesystem::path dir;
    std::vector<std::string> files;

    std::string path(const std::string& name) {
        files.push_back(name);
        return (dir / name).string();
    }
};

void run_scattering(const ExperimentConfig& cfg, OutputSink& sink, nlohmann::json& diag) {
    for (std::size_t k = 0; k < cfg.potentials.size(); ++k) {
        const auto& spec = cfg.potentials[k];
        const SampledPotential q =
            make_potential(spec.family, spec.params, cfg.grid, cfg.seed);
        const ScatteringTable table = transition_coefficients(
            q, default_lambda_grid(cfg.lambda_radius, cfg.lambda_step), cfg.threads);
        const std::string suffix = cfg.potentials.size() > 1 ? "_" + std::to_string(k) : "";
        save_potential_csv(q, sink.path("potential" + suffix + ".csv"));
        save_scattering_csv(table, sink.path("scattering" + suffix + ".csv"));
        diag["max_unitarity_residual_" + std::to_string(k)] = table.max_unitarity_residual;
    }
}

void run_entropy(const ExperimentConfig& cfg, OutputSink& sink, nlohmann::json& diag) {
    for (std::size_t k = 0; k < cfg.potentials.size(); ++k) {
        const auto& spec = cfg.potentials[k];
        const SampledPotential q =
            make_potential(spec.family, spec.params, cfg.grid, cfg.seed);
        EntropyReport report = entropy_kq_report(q);
        const EntropyReport windows = ktilde(q);
        report.K_tilde = windows.K_tilde;
        report.window_terms = windows.window_terms;
        const EntropyReport split = entropy_split(q, Complex(0.0, 1.0));
        report.K_plus = split.K_plus;
        report.K_minus = split.K_minus;
        report.splitting_residual = split.splitting_residual;
        const std::string suffix = cfg.potentials.size() > 1 ? "_" + std::to_string(k) : "";
        save_entropy_json(report, sink.path("entropy" + suffix + ".json"));
        diag["splitting_residual_" + std::to_string(k)] = report.splitting_residual;
    }
}

void run_equivalence(const ExperimentConfig& cfg, OutputSink& sink, nlohmann::json& diag) {
    std::ofstream summary(sink.dir / "equivalence_summary.csv");
    sink.files.push_back("equivalence_summary.csv");
    summary << "index,l2,h_fourier,h_smoothing,h_oscillation,k_tilde,ratio_smoothing,"
               "ratio_oscillation,ratio_ktilde\n";
    char buf[512];
    double worst = 0.0;
    for (std::size_t k = 0; k < cfg.potentials.size(); ++k) {
        const auto& spec = cfg.potentials[k];
        const SampledPotential q =
            make_potential(spec.family, spec.params, cfg.grid, cfg.seed);
        const EquivalenceReport rep = equivalence_report(q);
        save_equivalence_json(rep, sink.path("equivalence_" + std::to_string(k) + ".json"));
        std::snprintf(buf, sizeof buf,
                      "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", k, rep.r_l2,
                      rep.h_fourier, rep.h_smoothing, rep.h_oscillation, rep.k_tilde,
                      rep.ratio_smoothing, rep.ratio_oscillation, rep.ratio_ktilde);
        summary << buf;
        if (rep.h_fourier > 0.0)
            worst = std::max(worst, std::abs(rep.ratio_smoothing - 1.0));
    }
    diag["max_smoothing_route_deviation"] = worst;
}

void run_evolution(const ExperimentConfig& cfg, OutputSink& sink, nlohmann::json& diag) {
    const auto& spec = cfg.potentials.front();
    const SampledPotential q0 = make_potential(spec.family, spec.params, cfg.grid, cfg.seed);
    EvolveOptions opt;
    opt.dt = cfg.dt;
    const EvolutionLog log = conservation_report(q0, cfg.time_samples, cfg.s_list, opt);
    save_evolution_csv(log, sink.path("evolution.csv"));
    auto [qt, run_log] = evolve_split_step(q0, cfg.time_samples.back(), opt);
    save_potential_csv(qt, sink.path("final_snapshot.csv"));
    double l2_drift = 0.0, log_a_drift = 0.0;
    for (std::size_t j = 0; j < log.times.size(); ++j) {
        if (log.l2_norm.front() > 0.0)
            l2_drift = std::max(l2_drift, std::abs(log.l2_norm[j] / log.l2_norm.front() - 1.0));
        log_a_drift = std::max(log_a_drift, std::abs(log.log_a_i[j] - log.log_a_i.front()));
    }
    diag["l2_relative_drift"] = l2_drift;
    diag["log_a_i_drift"] = log_a_drift;
    diag["leaked_mass"] = std::max(log.leaked_mass, run_log.leaked_mass);
}

void run_symmetry_suite(const ExperimentConfig& cfg, OutputSink& sink, nlohmann::json& diag) {
    const auto& spec = cfg.potentials.front();
    const SampledPotential q = make_potential(spec.family, spec.params, cfg.grid, cfg.seed);
    const std::vector<double> grid = default_lambda_grid(cfg.lambda_radius, cfg.lambda_step);
    const ScatteringTable base = transition_coefficients(q, grid, cfg.threads);
    const std::size_t n = grid.size();

    nlohmann::json residuals;

    {  // dilation: r_{alpha q(alpha xi)}(lambda) = r_q(lambda/alpha)
        const double alpha = 2.0;
        std::vector<double> doubled(n);
        for (std::size_t j = 0; j < n; ++j) doubled[j] = alpha * grid[j];
        const ScatteringTable dil = transition_coefficients(dilate(q, alpha), doubled,
                                                            cfg.threads);
        double sup = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            sup = std::max(sup, std::abs(dil.r[j] - base.r[j]));
        residuals["dilate"] = sup;
    }
    {  // conjugation: r_conj(lambda) = conj(r(-lambda)); grid is symmetric
        const ScatteringTable con = transition_coefficients(conjugate(q), grid, cfg.threads);
        double sup = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            sup = std::max(sup, std::abs(con.r[j] - std::conj(base.r[n - 1 - j])));
        residuals["conjugate"] = sup;
    }
    {  // translation by an exact multiple of dx: r -> r e^{-i lambda l}
        const double ell = std::round(3.0 / q.dx) * q.dx;
        const ScatteringTable tra = transition_coefficients(translate(q, ell), grid,
                                                            cfg.threads);
        double sup = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            sup = std::max(sup, std::abs(tra.r[j] -
                                         base.r[j] * std::exp(Complex(0.0, -grid[j] * ell))));
        residuals["translate"] = sup;
    }
    {  // modulation by beta on the lambda grid: r_mod(lambda) = r(lambda + beta)
        const double beta = std::round(0.5 / cfg.lambda_step) * cfg.lambda_step;
        const long shift = std::lround(beta / cfg.lambda_step);
        const ScatteringTable mod = transition_coefficients(modulate(q, beta), grid,
                                                            cfg.threads);
        double sup = 0.0;
        for (std::size_t j = 0; j + static_cast<std::size_t>(shift) < n; ++j)
            sup = std::max(sup,
                           std::abs(mod.r[j] - base.r[j + static_cast<std::size_t>(shift)]));
        residuals["modulate"] = sup;
        residuals["modulate_beta"] = beta;
    }
    {  // rotation: r -> mu r
        const Complex mu(0.0, 1.0);
        const ScatteringTable rot = transition_coefficients(rotate(q, mu), grid, cfg.threads);
        double sup = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            sup = std::max(sup, std::abs(rot.r[j] - mu * base.r[j]));
        residuals["rotate"] = sup;
    }

    std::ofstream f(sink.dir / "symmetry_residuals.json");
    sink.files.push_back("symmetry_residuals.json");
    f << residuals.dump(2) << "\n";
    diag["symmetry_residuals"] = residuals;
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& config, const std::string& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    OutputSink sink;
    sink.dir = out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(sink.dir, ec);
    if (ec) throw Error("cannot create output directory " + sink.dir.string());

    RunManifest manifest;
    manifest.version = kVersion;
    manifest.config_echo = config.resolved();
    manifest.config_hash = config_hash(config);

    nlohmann::json diag;
    switch (config.kind) {
        case ExperimentKind::scattering: run_scattering(config, sink, diag); break;
        case ExperimentKind::entropy: run_entropy(config, sink, diag); break;
        case ExperimentKind::equivalence: run_equivalence(config, sink, diag); break;
        case ExperimentKind::evolution: run_evolution(config, sink, diag); break;
        case ExperimentKind::symmetry_suite: run_symmetry_suite(config, sink, diag); break;
    }
    manifest.diagnostics = diag;

    const auto stop = std::chrono::steady_clock::now();
    manifest.wall_clock_sec = std::chrono::duration<double>(stop - start).count();

    nlohmann::json m;
    m["config_hash"] = manifest.config_hash;
    m["version"] = manifest.version;
    m["wall_clock_sec"] = manifest.wall_clock_sec;
    m["diagnostics"] = manifest.diagnostics;
    m["config"] = manifest.config_echo;
    std::vector<std::string> outputs = sink.files;
    outputs.push_back("manifest.json");
    m["outputs"] = outputs;
    manifest.outputs = outputs;
    std::ofstream f(sink.dir / "manifest.json");
    if (!f) throw Error("cannot write manifest");
    f << m.dump(2) << "\n";
    return manifest;
}

}  // namespace nlscat
