#pragma once

#include <string>
#include <vector>

#include "nlscat/potential.hpp"
#include "nlscat/types.hpp"

namespace nlscat {

// Dirac system Z' = G Z, G = -(i lambda/2) sigma3 + [[0, conj(q)],[q, 0]],
// normalized by Z(0) = I. The potential is modeled as piecewise constant on
// grid cells (cell value = average of its two node samples) and each cell is
// advanced by the closed-form 2x2 exponential, so the scheme is exact for
// piecewise-constant q and keeps det Z = 1 structurally.
//
// Spectral conventions. The reduced transition matrix T(lambda) relating the
// Jost solutions is parametrized by the Dirac spectral variable lambda; it is
// assembled from the Krein-side quantities evaluated at lambda/2. Functions
// below that take a "lambda" argument state which variable they use.

// Fundamental matrix trajectory over [span_lo, span_hi] (clipped to the
// grid); the coordinate origin must be a grid node inside the span.
MatrixTrajectory fundamental_matrix(const SampledPotential& q, Complex lambda,
                                    double span_lo, double span_hi);
MatrixTrajectory fundamental_matrix(const SampledPotential& q, Complex lambda);

// Half-line Krein coefficient derived from q:
//   side = +1: A(xi) = -conj(q(xi/2))/2,  xi in [0, 2*truncation]
//   side = -1: A(xi) =  q(-xi/2)/2,       xi in [0, 2*truncation]
// Samples live on the step 2*dx grid induced by the potential grid.
struct KreinCoefficient {
    std::vector<Complex> samples;
    double dx = 0.0;  // step of the xi grid (equals 2*q.dx)

    double length() const { return dx * static_cast<double>(samples.size() - 1); }
};
KreinCoefficient krein_coefficient(const SampledPotential& q, int side, double truncation);

// Joint trajectory of the Krein system
//   P'   = i lambda P - conj(A) P_*,   P(0)   = 1,
//   P_*' = -A P,                       P_*(0) = 1,
// and its dual (same with A -> -A), stacked per node as
//   (0,0) = P, (1,0) = P_*, (0,1) = Phat, (1,1) = Phat_*.
// det_residual reports the deviation of the propagator determinant from its
// analytic value e^{i lambda xi}.
MatrixTrajectory krein_pair(const KreinCoefficient& A, Complex lambda);

// Limits of the continuous Wall polynomials at the Krein spectral variable
// lambda: a = (P_* + Phat_*)/2, b = (P_* - Phat_*)/2 evaluated at the
// truncation edge (exact limits for compactly supported q). For real lambda,
// |a|^2 = 1 + |b|^2.
struct WallLimits {
    Complex a_plus{1.0, 0.0};
    Complex b_plus{0.0, 0.0};
    Complex a_minus{1.0, 0.0};
    Complex b_minus{0.0, 0.0};
};
WallLimits wall_limits(const SampledPotential& q, Complex lambda, double truncation);

// Smallest truncation radius that covers the support of q on both sides.
double required_truncation(const SampledPotential& q);

// Per-lambda transition coefficients on a real grid, Dirac variable:
//   a(l) = a+ a- - b+ b-,  b(l) = a- conj(b+) - b- conj(a+),  r = b/a,
// with the Wall limits taken at l/2.
struct ScatteringTable {
    std::vector<double> lambda_grid;
    std::vector<Complex> a;
    std::vector<Complex> b;
    std::vector<Complex> r;
    Complex a_at_i{1.0, 0.0};
    double truncation_radius = 0.0;
    double max_unitarity_residual = 0.0;  // max | |a|^2 - |b|^2 - 1 |
};
// threads > 1 splits the sweep into fixed contiguous chunks; each lambda slot
// is written independently, so results are identical for any thread count.
ScatteringTable transition_coefficients(const SampledPotential& q,
                                        const std::vector<double>& lambda_grid,
                                        int threads = 1);

// Default sweep grid: symmetric, |lambda| <= 40, step 0.02.
std::vector<double> default_lambda_grid(double radius = 40.0, double step = 0.02);

// a at a point of the upper half-plane (Dirac variable), via Wall limits at
// z/2. Outer, so log|a(z)| >= 0 whenever |a| >= 1 on the real line.
Complex a_upper_half(const SampledPotential& q, Complex z);
Complex a_upper_half(const SampledPotential& q, Complex z, double truncation);

// Outer-function route: a(z) = exp(-(1/2 pi i) int log(1-|r|^2)/(l-z) dl),
// Dirac variable, quadrature over the table grid plus an O(l^-2) tail model
// fitted on the outer 10% of the grid.
struct OuterResult {
    Complex value{1.0, 0.0};
    double tail_magnitude = 0.0;  // |contribution of the modeled tails to log a|
    int clamp_hits = 0;           // number of grid points where log(1-|r|^2) hit -50
};
OuterResult a_from_reflection(const std::vector<double>& lambda_grid,
                              const std::vector<Complex>& r, Complex z);

// CSV: header comment with truncation radius, then
// lambda,re_a,im_a,re_b,im_b,re_r,im_r at 17 significant digits.
void save_scattering_csv(const ScatteringTable& table, const std::string& path);

}  // namespace nlscat
