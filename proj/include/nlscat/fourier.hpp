#pragma once

#include <vector>

#include "nlscat/potential.hpp"
#include "nlscat/types.hpp"

namespace nlscat {

// Uniform symmetric frequency grid produced by the DFT of a spatial grid:
// eta_k = 2 pi k / (n dx), k = -n/2 .. n/2-1.
struct FrequencyGrid {
    std::vector<double> eta;
    double d_eta = 0.0;
};

// Sobolev index s in [-1, 1/2). Construction validates the range.
struct SobolevIndex {
    double s;
    explicit SobolevIndex(double value);
};

// Continuous-normalization spectrum: (F q)(eta) ~ dx/sqrt(2 pi) * DFT,
// with the phase referenced to the true coordinate origin. Returned in
// eta-ascending order together with its FrequencyGrid.
struct Spectrum {
    FrequencyGrid grid;
    std::vector<Complex> values;
};
Spectrum spectrum(const SampledPotential& q);

// || q ||_{H^s} = ( sum (1+eta^2)^s |Fq|^2 d_eta )^{1/2}.
double sobolev_norm(const SampledPotential& q, SobolevIndex s);

// ( int |Fq(eta)|^2 / (1 + (eta+v)^2) d eta )^{1/2}; v=0 is the H^{-1} norm.
double shifted_h_minus_one(const SampledPotential& q, double v);

// Band-limited (zero-padded spectral) resampling by an integer factor >= 1.
// Support hints are preserved; the refined samples are re-zeroed outside.
SampledPotential fourier_upsample(const SampledPotential& q, int factor);

// In-place unnormalized FFT helpers used by the split-step evolution.
// sign=-1 forward (e^{-i 2 pi jk/n}), sign=+1 backward; n need not be a
// power of two.
void fft_inplace(std::vector<Complex>& a, int sign);

}  // namespace nlscat
