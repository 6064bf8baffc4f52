#include "nlscat/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "nlscat/fourier.hpp"

namespace nlscat {

double SampledPotential::l2_norm() const {
    double s = 0.0;
    for (const auto& v : samples) s += std::norm(v);
    return std::sqrt(s * dx);
}

double SampledPotential::max_abs() const {
    double m = 0.0;
    for (const auto& v : samples) m = std::max(m, std::abs(v));
    return m;
}

void SampledPotential::validate() const {
    if (samples.size() < 2) throw ParamError("potential: need at least 2 samples");
    if (!(dx > 0.0)) throw ParamError("potential: dx must be positive");
    if (support_lo > support_hi) throw ParamError("potential: empty support interval");
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const double x = xi(j);
        if ((x < support_lo || x > support_hi) && samples[j] != Complex(0.0, 0.0))
            throw ParamError("potential: nonzero sample outside support_hint at xi=" +
                             std::to_string(x));
    }
}

PotentialFamily family_from_string(const std::string& name) {
    if (name == "zero") return PotentialFamily::zero;
    if (name == "gaussian") return PotentialFamily::gaussian;
    if (name == "box") return PotentialFamily::box;
    if (name == "modulated_gaussian") return PotentialFamily::modulated_gaussian;
    if (name == "random_bandlimited") return PotentialFamily::random_bandlimited;
    throw ParamError("unknown potential family: " + name);
}

std::string family_to_string(PotentialFamily f) {
    switch (f) {
        case PotentialFamily::zero: return "zero";
        case PotentialFamily::gaussian: return "gaussian";
        case PotentialFamily::box: return "box";
        case PotentialFamily::modulated_gaussian: return "modulated_gaussian";
        case PotentialFamily::random_bandlimited: return "random_bandlimited";
    }
    throw ParamError("bad family enum");
}

namespace {

double get_param(const std::map<std::string, double>& p, const std::string& key,
                 std::optional<double> fallback = std::nullopt) {
    auto it = p.find(key);
    if (it != p.end()) return it->second;
    if (fallback) return *fallback;
    throw ParamError("missing potential parameter: " + key);
}

// Gaussian tails below ~1e-15 of peak are clipped to exact zeros so the
// support invariant holds literally.
constexpr double kTailCut = 1e-15;

void tighten_support(SampledPotential& q) {
    std::size_t lo = q.n(), hi = 0;
    for (std::size_t j = 0; j < q.n(); ++j) {
        if (q.samples[j] != Complex(0.0, 0.0)) {
            lo = std::min(lo, j);
            hi = std::max(hi, j);
        }
    }
    if (lo > hi) {  // all-zero
        q.support_lo = q.xi0;
        q.support_hi = q.xi0;
    } else {
        q.support_lo = q.xi(lo);
        q.support_hi = q.xi(hi);
    }
}

}  // namespace

SampledPotential make_potential(PotentialFamily family,
                                const std::map<std::string, double>& params,
                                const GridSpec& grid, std::uint64_t seed) {
    if (grid.n < 2) throw ParamError("grid: n must be >= 2");
    if (!(grid.dx > 0.0)) throw ParamError("grid: dx must be positive");

    SampledPotential q;
    q.dx = grid.dx;
    q.xi0 = grid.xi0;
    q.samples.assign(grid.n, Complex(0.0, 0.0));

    switch (family) {
        case PotentialFamily::zero:
            break;
        case PotentialFamily::gaussian:
        case PotentialFamily::modulated_gaussian: {
            const double amp_re = get_param(params, "amp", 1.0);
            const double amp_im = get_param(params, "amp_im", 0.0);
            const double width = get_param(params, "width", 1.0);
            const double center = get_param(params, "center", 0.0);
            if (!(width > 0.0)) throw ParamError("gaussian: width must be positive");
            const Complex amp(amp_re, amp_im);
            const double beta = family == PotentialFamily::modulated_gaussian
                                    ? get_param(params, "beta")
                                    : 0.0;
            const double peak = std::abs(amp);
            for (std::size_t j = 0; j < grid.n; ++j) {
                const double x = q.xi(j);
                const double u = (x - center) / width;
                const double env = std::exp(-0.5 * u * u);
                if (peak * env < kTailCut * std::max(peak, 1.0)) continue;
                Complex v = amp * env;
                if (beta != 0.0) v *= std::exp(Complex(0.0, -beta * x));
                q.samples[j] = v;
            }
            break;
        }
        case PotentialFamily::box: {
            const double amp_re = get_param(params, "amp");
            const double amp_im = get_param(params, "amp_im", 0.0);
            const double left = get_param(params, "left");
            const double right = get_param(params, "right");
            if (!(left < right)) throw ParamError("box: need left < right");
            const Complex amp(amp_re, amp_im);
            for (std::size_t j = 0; j < grid.n; ++j) {
                const double x = q.xi(j);
                if (x >= left && x <= right) q.samples[j] = amp;
            }
            break;
        }
        case PotentialFamily::random_bandlimited: {
            const double amp = get_param(params, "amp", 0.5);
            const double cutoff = get_param(params, "cutoff", 5.0);
            const double env_w = get_param(params, "envelope_width", 8.0);
            if (!(cutoff > 0.0)) throw ParamError("random_bandlimited: cutoff must be positive");
            if (!(env_w > 0.0))
                throw ParamError("random_bandlimited: envelope_width must be positive");
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            const std::size_t n = grid.n;
            std::vector<Complex> spec(n, Complex(0.0, 0.0));
            const double d_eta = 2.0 * M_PI / (static_cast<double>(n) * grid.dx);
            for (std::size_t k = 0; k < n; ++k) {
                const double eta =
                    (k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - double(n)) *
                    d_eta;
                // draw unconditionally so the stream is grid-independent in order
                const double re = gauss(rng), im = gauss(rng);
                if (std::abs(eta) <= cutoff) spec[k] = Complex(re, im);
            }
            fft_inplace(spec, +1);
            // super-gaussian envelope gives a compact, smooth bump
            double peak = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double x = q.xi(j);
                const double u = x / env_w;
                const double env = std::exp(-std::pow(u * u, 4.0));
                spec[j] *= env;
                peak = std::max(peak, std::abs(spec[j]));
            }
            if (peak > 0.0) {
                const double scale = amp / peak;
                for (std::size_t j = 0; j < n; ++j) {
                    Complex v = spec[j] * scale;
                    if (std::abs(v) < kTailCut) v = 0.0;
                    q.samples[j] = v;
                }
            }
            break;
        }
    }
    tighten_support(q);
    q.validate();
    return q;
}

SampledPotential dilate(const SampledPotential& q, double alpha) {
    if (!(alpha > 0.0)) throw ParamError("dilate: alpha must be positive");
    // (alpha q(alpha xi))(xi0/alpha + j dx/alpha) = alpha q(xi0 + j dx):
    // same samples, rescaled grid.
    SampledPotential out = q;
    out.dx = q.dx / alpha;
    out.xi0 = q.xi0 / alpha;
    out.support_lo = q.support_lo / alpha;
    out.support_hi = q.support_hi / alpha;
    for (auto& v : out.samples) v *= alpha;
    return out;
}

SampledPotential conjugate(const SampledPotential& q) {
    SampledPotential out = q;
    for (auto& v : out.samples) v = std::conj(v);
    return out;
}

SampledPotential translate(const SampledPotential& q, double ell) {
    // The grid carries its own origin, so translation is exact for any ell.
    SampledPotential out = q;
    out.xi0 += ell;
    out.support_lo += ell;
    out.support_hi += ell;
    return out;
}

SampledPotential modulate(const SampledPotential& q, double beta) {
    SampledPotential out = q;
    for (std::size_t j = 0; j < out.n(); ++j)
        out.samples[j] *= std::exp(Complex(0.0, -beta * out.xi(j)));
    return out;
}

SampledPotential rotate(const SampledPotential& q, Complex mu) {
    if (std::abs(std::abs(mu) - 1.0) > 1e-12)
        throw ParamError("rotate: |mu| must equal 1");
    SampledPotential out = q;
    for (auto& v : out.samples) v *= mu;
    return out;
}

GridCheck grid_adequacy(const SampledPotential& q) {
    GridCheck c;
    const double span = q.dx * static_cast<double>(q.n() - 1);
    c.support_fraction = (q.support_hi - q.support_lo) / span;

    Spectrum sp = spectrum(q);
    double total = 0.0, tail = 0.0;
    const std::size_t n = sp.values.size();
    const std::size_t edge = n / 20;  // outer 5% of bins on each side
    for (std::size_t k = 0; k < n; ++k) {
        const double m = std::norm(sp.values[k]);
        total += m;
        if (k < edge || k + edge >= n) tail += m;
    }
    c.tail_mass = total > 0.0 ? tail / total : 0.0;
    c.ok = c.support_fraction <= 0.75 && c.tail_mass <= 1e-6;
    return c;
}

void save_potential_csv(const SampledPotential& q, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open for writing: " + path);
    f << "xi,re_q,im_q\n";
    char buf[128];
    for (std::size_t j = 0; j < q.n(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", q.xi(j), q.samples[j].real(),
                      q.samples[j].imag());
        f << buf;
    }
}

SampledPotential load_potential_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open: " + path);
    std::string line;
    std::getline(f, line);  // header
    std::vector<double> xs;
    std::vector<Complex> vs;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double x, re, im;
        char c1, c2;
        if (!(ss >> x >> c1 >> re >> c2 >> im)) throw Error("bad CSV row in " + path);
        xs.push_back(x);
        vs.push_back(Complex(re, im));
    }
    if (xs.size() < 2) throw Error("potential CSV too short: " + path);
    SampledPotential q;
    q.xi0 = xs.front();
    q.dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    q.samples = std::move(vs);
    q.support_lo = q.xi0;
    q.support_hi = q.xi_max();
    // tighten to the actual nonzero range
    std::size_t lo = q.n(), hi = 0;
    for (std::size_t j = 0; j < q.n(); ++j)
        if (q.samples[j] != Complex(0.0, 0.0)) {
            lo = std::min(lo, j);
            hi = std::max(hi, j);
        }
    if (lo <= hi) {
        q.support_lo = q.xi(lo);
        q.support_hi = q.xi(hi);
    } else {
        q.support_lo = q.support_hi = q.xi0;
    }
    q.validate();
    return q;
}

}  // namespace nlscat
