#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlscat/entropy.hpp"
#include "nlscat/fourier.hpp"
#include "nlscat/nls.hpp"
#include "nlscat/oscillation.hpp"
#include "nlscat/potential.hpp"
#include "nlscat/runner.hpp"
#include "nlscat/scattering.hpp"

namespace py = pybind11;
using namespace nlscat;

PYBIND11_MODULE(_nlscat, m) {
    m.doc() = "Dirac scattering, entropy functionals, and NLS evolution";

    py::register_exception<Error>(m, "NlscatError");

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def(py::init([](double dx, double xi0, std::size_t n) {
                 return GridSpec{dx, xi0, n};
             }),
             py::arg("dx"), py::arg("xi0"), py::arg("n"))
        .def_readwrite("dx", &GridSpec::dx)
        .def_readwrite("xi0", &GridSpec::xi0)
        .def_readwrite("n", &GridSpec::n);

    py::class_<SampledPotential>(m, "SampledPotential")
        .def(py::init<>())
        .def_readwrite("samples", &SampledPotential::samples)
        .def_readwrite("dx", &SampledPotential::dx)
        .def_readwrite("xi0", &SampledPotential::xi0)
        .def_readwrite("support_lo", &SampledPotential::support_lo)
        .def_readwrite("support_hi", &SampledPotential::support_hi)
        .def("l2_norm", &SampledPotential::l2_norm)
        .def("max_abs", &SampledPotential::max_abs)
        .def("xi", &SampledPotential::xi)
        .def("__len__", &SampledPotential::n);

    m.def(
        "make_potential",
        [](const std::string& family, const std::map<std::string, double>& params,
           const GridSpec& grid, std::uint64_t seed) {
            return make_potential(family_from_string(family), params, grid, seed);
        },
        py::arg("family"), py::arg("params") = std::map<std::string, double>{},
        py::arg("grid") = GridSpec{}, py::arg("seed") = 0);

    m.def("dilate", &dilate);
    m.def("conjugate", &conjugate);
    m.def("translate", &translate);
    m.def("modulate", &modulate);
    m.def("rotate", &rotate);

    m.def("sobolev_norm",
          [](const SampledPotential& q, double s) { return sobolev_norm(q, SobolevIndex(s)); });
    m.def("shifted_h_minus_one", &shifted_h_minus_one);
    m.def("fourier_upsample", &fourier_upsample);

    py::class_<ScatteringTable>(m, "ScatteringTable")
        .def_readonly("lambda_grid", &ScatteringTable::lambda_grid)
        .def_readonly("a", &ScatteringTable::a)
        .def_readonly("b", &ScatteringTable::b)
        .def_readonly("r", &ScatteringTable::r)
        .def_readonly("a_at_i", &ScatteringTable::a_at_i)
        .def_readonly("truncation_radius", &ScatteringTable::truncation_radius)
        .def_readonly("max_unitarity_residual", &ScatteringTable::max_unitarity_residual);

    m.def("default_lambda_grid", &default_lambda_grid, py::arg("radius") = 40.0,
          py::arg("step") = 0.02);
    m.def("transition_coefficients", &transition_coefficients, py::arg("q"),
          py::arg("lambda_grid"), py::arg("threads") = 1);
    m.def("a_upper_half",
          py::overload_cast<const SampledPotential&, Complex>(&a_upper_half));
    m.def("a_from_reflection", [](const std::vector<double>& grid,
                                  const std::vector<Complex>& r, Complex z) {
        const OuterResult res = a_from_reflection(grid, r, z);
        return py::make_tuple(res.value, res.tail_magnitude, res.clamp_hits);
    });

    py::class_<EntropyReport>(m, "EntropyReport")
        .def_readonly("K_full", &EntropyReport::K_full)
        .def_readonly("K_tilde", &EntropyReport::K_tilde)
        .def_readonly("window_terms", &EntropyReport::window_terms)
        .def_readonly("K_plus", &EntropyReport::K_plus)
        .def_readonly("K_minus", &EntropyReport::K_minus)
        .def_readonly("splitting_residual", &EntropyReport::splitting_residual)
        .def_readonly("a_abs_ode", &EntropyReport::a_abs_ode)
        .def_readonly("a_abs_outer", &EntropyReport::a_abs_outer)
        .def_readonly("route_rel_diff", &EntropyReport::route_rel_diff);

    m.def("entropy_kq", &entropy_kq);
    m.def("entropy_kq_report", &entropy_kq_report);
    m.def("ktilde", py::overload_cast<const SampledPotential&>(&ktilde));
    m.def("weyl_pair", &weyl_pair);
    m.def("entropy_split", &entropy_split);

    py::class_<EquivalenceReport>(m, "EquivalenceReport")
        .def_readonly("h_fourier", &EquivalenceReport::h_fourier)
        .def_readonly("h_smoothing", &EquivalenceReport::h_smoothing)
        .def_readonly("h_oscillation", &EquivalenceReport::h_oscillation)
        .def_readonly("k_tilde", &EquivalenceReport::k_tilde)
        .def_readonly("l2_norm", &EquivalenceReport::r_l2)
        .def_readonly("ratio_smoothing", &EquivalenceReport::ratio_smoothing)
        .def_readonly("ratio_oscillation", &EquivalenceReport::ratio_oscillation)
        .def_readonly("ratio_ktilde", &EquivalenceReport::ratio_ktilde);

    m.def("exp_smoothing", [](const SampledPotential& f) {
        const SmoothedTrace t = exp_smoothing(f);
        return py::make_tuple(t.o, t.l2_sq, t.residual);
    });
    m.def("oscillation_sum", [](const SampledPotential& f) {
        const OscillationSum s = oscillation_sum(f);
        return py::make_tuple(s.terms, s.total);
    });
    m.def("equivalence_report", &equivalence_report);

    py::class_<EvolutionLog>(m, "EvolutionLog")
        .def_readonly("times", &EvolutionLog::times)
        .def_readonly("l2_norm", &EvolutionLog::l2_norm)
        .def_readonly("log_a_i", &EvolutionLog::log_a_i)
        .def_readonly("hs_norms", &EvolutionLog::hs_norms)
        .def_readonly("leaked_mass", &EvolutionLog::leaked_mass);

    m.def(
        "evolve_split_step",
        [](const SampledPotential& q0, double t_final, double dt) {
            EvolveOptions opt;
            opt.dt = dt;
            return evolve_split_step(q0, t_final, opt);
        },
        py::arg("q0"), py::arg("t_final"), py::arg("dt") = 5e-4);
    m.def("evolve_spectral", &evolve_spectral);
    m.def(
        "conservation_report",
        [](const SampledPotential& q0, const std::vector<double>& times,
           const std::vector<double>& s_list, double dt) {
            EvolveOptions opt;
            opt.dt = dt;
            return conservation_report(q0, times, s_list, opt);
        },
        py::arg("q0"), py::arg("times"), py::arg("s_list") = std::vector<double>{-1.0, 0.0},
        py::arg("dt") = 5e-4);
    m.def(
        "sobolev_window_check",
        [](const SampledPotential& q0, double s, const std::vector<double>& times,
           double kappa1, double kappa2, double dt) {
            EvolveOptions opt;
            opt.dt = dt;
            return sobolev_window_check(q0, SobolevIndex(s), times, {kappa1, kappa2}, opt);
        },
        py::arg("q0"), py::arg("s"), py::arg("times"), py::arg("kappa1") = 1.0,
        py::arg("kappa2") = 1.5, py::arg("dt") = 5e-4);

    m.def("validate_config", [](const std::string& text) {
        return validate_config(text).resolved().dump(2);
    });
    m.def("run_experiment", [](const std::string& config_text, const std::string& out_dir) {
        const ExperimentConfig cfg = validate_config(config_text);
        const RunManifest manifest = run_experiment(cfg, out_dir);
        return py::make_tuple(manifest.config_hash, manifest.outputs);
    });
}
