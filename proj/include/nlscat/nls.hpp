#pragma once

#include <map>
#include <string>
#include <vector>

#include "nlscat/fourier.hpp"
#include "nlscat/potential.hpp"
#include "nlscat/scattering.hpp"
#include "nlscat/types.hpp"

namespace nlscat {

// Defocusing NLS: i q_t = -q_xixi + 2 |q|^2 q, solved by Strang splitting on
// the periodic grid box (half nonlinear phase, full spectral linear step
// with multiplier e^{-i eta^2 dt}, half nonlinear phase).

struct EvolutionLog {
    std::vector<double> times;
    std::vector<double> l2_norm;
    std::vector<double> log_a_i;                    // empty unless scattering was requested
    std::map<double, std::vector<double>> hs_norms;  // s -> series
    std::map<double, std::vector<bool>> window_flags;
    double leaked_mass = 0.0;      // max guard-band L^2 fraction seen during the run
    double truncated_mass = 0.0;   // L^2 mass discarded when re-truncating snapshots
};

struct EvolveOptions {
    double dt = 5e-4;
    double guard_fraction = 0.05;     // width of each wraparound guard band
    double guard_threshold = 1e-8;    // max tolerated guard-band mass fraction
    std::size_t log_every = 100;      // cadence (in steps) of the l2 log
};

// Evolve to t_final (t_final may be negative; the scheme is time symmetric).
std::pair<SampledPotential, EvolutionLog> evolve_split_step(const SampledPotential& q0,
                                                            double t_final,
                                                            const EvolveOptions& opt = {});

// Exact spectral evolution r(l, t) = e^{-i l^2 t} r(l, 0); a is unchanged
// and b is updated so that r = b/a and |a|^2 - |b|^2 = 1 still hold.
ScatteringTable evolve_spectral(const ScatteringTable& table, double t);

// Re-truncate an evolved snapshot: zero samples below rel_floor * max|q| and
// tighten the support window; returns the discarded L^2 mass via *discarded.
SampledPotential truncate_tails(const SampledPotential& q, double rel_floor = 1e-10,
                                double* discarded = nullptr);

// At each requested time: L^2 norm, log|a(i)| of the truncated snapshot, and
// H^s norms for the given indices. Times must be increasing; the first entry
// may be 0.
EvolutionLog conservation_report(const SampledPotential& q0, const std::vector<double>& times,
                                 const std::vector<double>& s_list,
                                 const EvolveOptions& opt = {});

// Two-sided Sobolev window. For s in [-1, 0]:
//   ratio(t) = ||q(t)||_{H^s} / ||q0||_{H^s} in [k1 (1+R)^{2s}, k2 (1+R)^{-2s}],
// R = ||q0||_{L^2}. For s in (0, 1/2): ||q(t)||_{H^s} <= k2 (R^{1+2s} + ||q0||_{H^s}).
struct WindowConstants {
    double kappa1 = 1.0;
    double kappa2 = 1.5;
};
std::vector<bool> sobolev_window_check(const SampledPotential& q0, SobolevIndex s,
                                       const std::vector<double>& times,
                                       const WindowConstants& kappa = {},
                                       const EvolveOptions& opt = {});

void save_evolution_csv(const EvolutionLog& log, const std::string& path);

}  // namespace nlscat
