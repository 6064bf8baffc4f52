#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nlscat/potential.hpp"
#include "nlscat/scattering.hpp"
#include "nlscat/types.hpp"

namespace nlscat {

// Real symmetric positive-definite 2x2 matrices H(xi) = N^T N sampled on the
// Szego-solution grid. Stored row-major as (h11, h12, h12, h22).
struct HamiltonianTrace {
    std::vector<double> xi;
    std::vector<std::array<double, 4>> H;
    double det_residual = 0.0;  // max |det H - 1|

    std::size_t size() const { return xi.size(); }
};

// Entropy diagnostics. K_full = K(i) = 2 log|a| at the relevant point of the
// upper half-plane; K_tilde = sum over integer k of det(int_k^{k+2} H) - 4.
struct EntropyReport {
    double K_full = 0.0;
    double K_tilde = 0.0;
    std::map<long, double> window_terms;
    double K_plus = 0.0;
    double K_minus = 0.0;
    double splitting_residual = 0.0;
    // route diagnostics for K_full
    double a_abs_ode = 1.0;    // |a| via the complex-parameter ODE route
    double a_abs_outer = 1.0;  // |a| via the outer integral of log(1-|r|^2)
    double route_rel_diff = 0.0;
    int outer_clamp_hits = 0;
};

// Solution of J N' + Q N = 0, N(0) = I, with Q = [[-Im q, -Re q],
// [-Re q, Im q]] -- equivalently N' = (JQ) N with the real trace-free
// generator JQ = [[Re q, -Im q],[-Im q, -Re q]]. Entries are real; det N = 1.
MatrixTrajectory szego_solution(const SampledPotential& q, double span_lo, double span_hi);
MatrixTrajectory szego_solution(const SampledPotential& q);

HamiltonianTrace hamiltonian(const MatrixTrajectory& N);

// Window functional on [k, k+2] for k in [k_min, k_max]; composite Simpson
// on the trace grid (window endpoints must land on nodes). Fills K_tilde and
// window_terms only.
EntropyReport ktilde(const HamiltonianTrace& H, long k_min, long k_max);

// Window range covering the support plus two guard windows each side; terms
// outside it vanish identically for compactly supported q (H is a constant
// det-1 Gram matrix there).
std::pair<long, long> default_window_range(const SampledPotential& q);
EntropyReport ktilde(const SampledPotential& q);

// K(i) = 2 log|a(i)| with a evaluated in the same (Krein-side) spectral
// variable as the Wall limits; cross-checked against the outer-function
// route, which is evaluated at the matching point of the Dirac variable.
// Throws ConsistencyError if the routes disagree by more than 5%.
double entropy_kq(const SampledPotential& q);
EntropyReport entropy_kq_report(const SampledPotential& q);

// Half-line Weyl functions m_pm(z) = i (a_pm - b_pm)/(a_pm + b_pm) from the
// Wall limits at z (Krein-side variable); Herglotz, so Im m_pm > 0.
std::pair<Complex, Complex> weyl_pair(const SampledPotential& q, Complex z);

// K_plus/K_minus by Poisson quadrature of log Im m_pm boundary values
// (Im m_pm(lambda) = |a_pm + b_pm|^{-2} on the real line) and the splitting
// residual K+ + K- - log(4 Im m+ Im m- / |m+ + m-|^2) - K(z).
EntropyReport entropy_split(const SampledPotential& q, Complex z);

void save_entropy_json(const EntropyReport& report, const std::string& path);

}  // namespace nlscat
