#include "nlscat/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace nlscat {

SobolevIndex::SobolevIndex(double value) : s(value) {
    if (!(value >= -1.0 && value < 0.5))
        throw ParamError("Sobolev index must lie in [-1, 1/2), got " + std::to_string(value));
}

void fft_inplace(std::vector<Complex>& a, int sign) {
    if (a.empty()) return;
    const int n = static_cast<int>(a.size());
    fftw_complex* buf = reinterpret_cast<fftw_complex*>(a.data());
    // FFTW_ESTIMATE keeps planning deterministic and leaves the input intact.
    fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                      FFTW_ESTIMATE);
    if (!plan) throw IntegrationError("fftw plan creation failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

Spectrum spectrum(const SampledPotential& q) {
    const std::size_t n = q.n();
    std::vector<Complex> work(q.samples);
    fft_inplace(work, -1);

    Spectrum sp;
    sp.grid.d_eta = 2.0 * M_PI / (static_cast<double>(n) * q.dx);
    sp.grid.eta.resize(n);
    sp.values.resize(n);

    const double scale = q.dx / std::sqrt(2.0 * M_PI);
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < n; ++i) {
        // i-th output slot holds DFT bin k with eta ascending
        const std::ptrdiff_t kk = static_cast<std::ptrdiff_t>(i) -
                                  static_cast<std::ptrdiff_t>(half);
        const std::size_t k = kk < 0 ? n + static_cast<std::size_t>(kk)
                                     : static_cast<std::size_t>(kk);
        const double eta = static_cast<double>(kk) * sp.grid.d_eta;
        sp.grid.eta[i] = eta;
        // phase referencing the true origin: samples start at xi0, not 0
        sp.values[i] = work[k] * scale * std::exp(Complex(0.0, -eta * q.xi0));
    }
    return sp;
}

double sobolev_norm(const SampledPotential& q, SobolevIndex s) {
    Spectrum sp = spectrum(q);
    double acc = 0.0;
    for (std::size_t k = 0; k < sp.values.size(); ++k) {
        const double eta = sp.grid.eta[k];
        acc += std::pow(1.0 + eta * eta, s.s) * std::norm(sp.values[k]);
    }
    return std::sqrt(acc * sp.grid.d_eta);
}

double shifted_h_minus_one(const SampledPotential& q, double v) {
    Spectrum sp = spectrum(q);
    double acc = 0.0;
    for (std::size_t k = 0; k < sp.values.size(); ++k) {
        const double u = sp.grid.eta[k] + v;
        acc += std::norm(sp.values[k]) / (1.0 + u * u);
    }
    return std::sqrt(acc * sp.grid.d_eta);
}

SampledPotential fourier_upsample(const SampledPotential& q, int factor) {
    if (factor < 1) throw ParamError("fourier_upsample: factor must be >= 1");
    if (factor == 1) return q;
    const std::size_t n = q.n();
    const std::size_t m = n * static_cast<std::size_t>(factor);

    std::vector<Complex> spec(q.samples);
    fft_inplace(spec, -1);

    // zero-pad in the middle (between positive and negative halves)
    std::vector<Complex> big(m, Complex(0.0, 0.0));
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < half; ++k) big[k] = spec[k];
    for (std::size_t k = half; k < n; ++k) big[m - n + k] = spec[k];
    // split the Nyquist bin symmetrically to keep real inputs real
    if (n % 2 == 0) {
        big[half] = spec[half] * 0.5;
        big[m - half] = spec[half] * 0.5;
    }
    fft_inplace(big, +1);

    SampledPotential out;
    out.dx = q.dx / factor;
    out.xi0 = q.xi0;
    out.support_lo = q.support_lo;
    out.support_hi = q.support_hi;
    out.samples.resize(m);
    const double scale = 1.0 / static_cast<double>(n);
    const double slack = 0.5 * out.dx;
    for (std::size_t j = 0; j < m; ++j) {
        const double x = out.xi(j);
        Complex vv = big[j] * scale;
        // band-limited interpolation rings slightly outside the support
        // window; re-zero it there so the invariant survives
        if (x < out.support_lo - slack || x > out.support_hi + slack) vv = 0.0;
        out.samples[j] = vv;
    }
    // the re-zeroing may have moved the edges; recompute them
    std::size_t lo = out.n(), hi = 0;
    for (std::size_t j = 0; j < out.n(); ++j)
        if (out.samples[j] != Complex(0.0, 0.0)) {
            lo = std::min(lo, j);
            hi = std::max(hi, j);
        }
    if (lo <= hi) {
        out.support_lo = std::min(out.support_lo, out.xi(lo));
        out.support_hi = std::max(out.support_hi, out.xi(hi));
    }
    out.validate();
    return out;
}

}  // namespace nlscat
