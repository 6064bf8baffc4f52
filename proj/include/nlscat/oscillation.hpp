#pragma once

#include <map>
#include <string>
#include <vector>

#include "nlscat/potential.hpp"
#include "nlscat/types.hpp"

namespace nlscat {

// Exponential smoothing o(x) = e^{-x} int_{-inf}^x f(y) e^y dy, computed by
// an exact per-cell recurrence for piecewise-linear f. l2_sq includes the
// analytic tail |o(x_max)|^2 / 2 past the grid (where f vanishes).
struct SmoothedTrace {
    std::vector<double> xi;
    std::vector<Complex> o;
    double residual = 0.0;  // max |o' + o - f| at cell midpoints
    double l2_sq = 0.0;
};
SmoothedTrace exp_smoothing(const SampledPotential& f);

// Windowed oscillation of the antiderivative g(x) = int_{x_min}^x f:
// terms[k] = int_k^{k+2} |g - <g>|^2 dx with <g> the window mean. Invariant
// under constant shifts of g by construction.
struct OscillationSum {
    std::map<long, double> terms;
    double total = 0.0;
};
OscillationSum oscillation_sum(const SampledPotential& f);
OscillationSum oscillation_sum(const SampledPotential& f, long k_min, long k_max);

// Matrix tail average O(x) = e^x int_x^inf e^{-s} Q(s) ds for the real
// symmetric symbol Q = [[-Im q, -Re q],[-Re q, Im q]], by the mirrored
// backward recurrence. det_residual is repurposed to hold sup_x ||O||_HS.
MatrixTrajectory tail_average(const SampledPotential& q);

// The three H^{-1} routes plus the window-determinant functional, with the
// ratios against the Fourier-side value.
struct EquivalenceReport {
    double h_fourier = 0.0;      // || f ||_{H^-1}^2 via the spectrum
    double h_smoothing = 0.0;    // || o_f ||_{L^2}^2
    double h_oscillation = 0.0;  // oscillation_sum total
    double k_tilde = 0.0;
    double r_l2 = 0.0;  // || q ||_{L^2}
    double ratio_smoothing = 0.0;
    double ratio_oscillation = 0.0;
    double ratio_ktilde = 0.0;
};
EquivalenceReport equivalence_report(const SampledPotential& q);

void save_equivalence_json(const EquivalenceReport& report, const std::string& path);
void save_oscillation_csv(const OscillationSum& sum, const std::string& path);

}  // namespace nlscat
