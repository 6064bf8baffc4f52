#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlscat/types.hpp"

namespace nlscat {

// Complex potential q sampled on a uniform grid xi0 + j*dx. Samples outside
// [support_lo, support_hi] are exactly zero; downstream truncation policies
// rely on that.
struct SampledPotential {
    std::vector<Complex> samples;
    double dx = 0.0;
    double xi0 = 0.0;
    double support_lo = 0.0;
    double support_hi = 0.0;

    std::size_t n() const { return samples.size(); }
    double xi(std::size_t j) const { return xi0 + static_cast<double>(j) * dx; }
    double xi_max() const { return xi(n() - 1); }

    double l2_norm() const;
    double max_abs() const;

    void validate() const;  // throws ParamError on invariant violation
};

enum class PotentialFamily { zero, gaussian, box, modulated_gaussian, random_bandlimited };

PotentialFamily family_from_string(const std::string& name);
std::string family_to_string(PotentialFamily f);

struct GridSpec {
    double dx = 0.005;
    double xi0 = -20.48;
    std::size_t n = 8192;
};

// Families and parameters:
//   zero                : {}
//   gaussian            : amp (complex ok via amp_re/amp_im), width>0, center
//   box                 : amp, left < right
//   modulated_gaussian  : gaussian params plus beta (samples *= e^{-i beta xi})
//   random_bandlimited  : amp, cutoff>0, envelope_width>0, plus explicit seed
SampledPotential make_potential(PotentialFamily family,
                                const std::map<std::string, double>& params,
                                const GridSpec& grid, std::uint64_t seed = 0);

enum class SymmetryOp { dilate, conjugate, translate, modulate, rotate };

// The five symmetries of the scattering transform. Conventions (checked by
// the scattering covariance tests):
//   dilate(alpha)  : q -> alpha q(alpha xi),      r(lambda) -> r(lambda/alpha)
//   conjugate      : q -> conj(q),                r(lambda) -> conj(r(-lambda))
//   translate(ell) : q -> q(xi - ell),            r -> r * e^{-i lambda ell}
//   modulate(beta) : q -> e^{-i beta xi} q,       r(lambda) -> r(lambda + beta)
//   rotate(mu)     : q -> mu q, |mu| = 1,         r -> mu r
SampledPotential dilate(const SampledPotential& q, double alpha);
SampledPotential conjugate(const SampledPotential& q);
SampledPotential translate(const SampledPotential& q, double ell);
SampledPotential modulate(const SampledPotential& q, double beta);
SampledPotential rotate(const SampledPotential& q, Complex mu);

// Grid adequacy diagnostics (support fraction of the window, estimated
// spectral mass near the Nyquist band). Callers decide whether to proceed.
struct GridCheck {
    bool ok = true;
    double support_fraction = 0.0;  // support width / grid span
    double tail_mass = 0.0;         // spectral mass in outer 5% of bins / total
};
GridCheck grid_adequacy(const SampledPotential& q);

// CSV round trip: columns xi, re_q, im_q at 17 significant digits.
void save_potential_csv(const SampledPotential& q, const std::string& path);
SampledPotential load_potential_csv(const std::string& path);

}  // namespace nlscat
