#include "nlscat/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nlscat/entropy.hpp"
#include "nlscat/fourier.hpp"

namespace nlscat {

namespace {

// one exact step of o' + o = f over length h with f linear from f0 to f1
Complex smoothing_step(Complex o, Complex f0, Complex f1, double h) {
    const double em = std::exp(-h);
    return em * o + f0 * (1.0 - em) + (f1 - f0) * ((h - 1.0 + em) / h);
}

}  // namespace

SmoothedTrace exp_smoothing(const SampledPotential& f) {
    f.validate();
    const std::size_t n = f.n();
    const double h = f.dx;
    SmoothedTrace trace;
    trace.xi.resize(n);
    trace.o.resize(n);
    trace.xi[0] = f.xi(0);
    trace.o[0] = 0.0;  // f vanishes left of the grid
    for (std::size_t j = 0; j + 1 < n; ++j) {
        trace.o[j + 1] = smoothing_step(trace.o[j], f.samples[j], f.samples[j + 1], h);
        trace.xi[j + 1] = f.xi(j + 1);
    }

    // residual |o' + o - f| at cell midpoints; o' from a central difference
    // at quarter-step spacing so the stencil stays inside one cell, where
    // the piecewise-linear model is smooth
    double max_f = 0.0;
    for (const auto& v : f.samples) max_f = std::max(max_f, std::abs(v));
    double res = 0.0;
    const double hq = 0.25 * h;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const Complex f0 = f.samples[j], f1 = f.samples[j + 1];
        auto f_at = [&](double s) { return f0 + (f1 - f0) * (s / h); };
        const Complex oq = smoothing_step(trace.o[j], f0, f_at(hq), hq);        // x_j + h/4
        const Complex om = smoothing_step(oq, f_at(hq), f_at(2 * hq), hq);      // midpoint
        const Complex op = smoothing_step(om, f_at(2 * hq), f_at(3 * hq), hq);  // x_j + 3h/4
        // Richardson-extrapolated central differences at half-widths h/4, h/2
        const Complex d_quarter = (op - oq) / (2.0 * hq);
        const Complex d_half = (trace.o[j + 1] - trace.o[j]) / h;
        const Complex deriv = (4.0 * d_quarter - d_half) / 3.0;
        res = std::max(res, std::abs(deriv + om - f_at(2 * hq)));
    }
    trace.residual = res;
    if (res > 1e-6 * (1.0 + max_f))
        throw ConsistencyError("exp_smoothing: ODE residual " + std::to_string(res));

    // trapezoid L^2 plus the analytic decay tail past the last node
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        acc += w * std::norm(trace.o[j]);
    }
    trace.l2_sq = acc * h + 0.5 * std::norm(trace.o[n - 1]);
    return trace;
}

OscillationSum oscillation_sum(const SampledPotential& f, long k_min, long k_max) {
    f.validate();
    if (k_min > k_max) throw ParamError("oscillation_sum: empty window range");
    const std::size_t n = f.n();
    const double h = f.dx;
    const long per_window = std::lround(2.0 / h);
    if (std::abs(per_window * h - 2.0) > 1e-9 || per_window % 2 != 0)
        throw GridError("oscillation_sum: grid spacing must divide the window length 2");

    // cumulative trapezoid antiderivative, g(x_min) = 0
    std::vector<Complex> g(n);
    g[0] = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j)
        g[j + 1] = g[j] + 0.5 * h * (f.samples[j] + f.samples[j + 1]);

    OscillationSum sum;
    for (long k = k_min; k <= k_max; ++k) {
        const double x0 = static_cast<double>(k);
        const double idx = (x0 - f.xi0) / h;
        const double rounded = std::round(idx);
        if (std::abs(idx - rounded) > 1e-6 || rounded < 0.0 ||
            rounded + static_cast<double>(per_window) > static_cast<double>(n - 1))
            throw GridError("oscillation_sum: window k=" + std::to_string(k) +
                            " not covered by the grid");
        const std::size_t j0 = static_cast<std::size_t>(rounded);
        // Simpson moments of g and |g|^2 over the window
        Complex m1 = 0.0;
        double m2 = 0.0;
        for (long j = 0; j <= per_window; ++j) {
            const double w = (j == 0 || j == per_window) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            const Complex& gj = g[j0 + static_cast<std::size_t>(j)];
            m1 += w * gj;
            m2 += w * std::norm(gj);
        }
        m1 *= h / 3.0;
        m2 *= h / 3.0;
        // int |g - <g>|^2 = int |g|^2 - |int g|^2 / |I|
        const double term = m2 - 0.5 * std::norm(m1);
        sum.terms[k] = term;
        sum.total += term;
    }
    return sum;
}

OscillationSum oscillation_sum(const SampledPotential& f) {
    const long k_lo = static_cast<long>(std::floor(f.support_lo)) - 3;
    const long k_hi = static_cast<long>(std::ceil(f.support_hi)) + 1;
    return oscillation_sum(f, k_lo, k_hi);
}

MatrixTrajectory tail_average(const SampledPotential& q) {
    q.validate();
    const std::size_t n = q.n();
    const double h = q.dx;
    MatrixTrajectory traj;
    traj.xi.resize(n);
    traj.values.resize(n);
    auto symbol = [](Complex v) {
        return Mat2{{Complex(-v.imag()), Complex(-v.real()), Complex(-v.real()),
                     Complex(v.imag())}};
    };
    traj.xi[n - 1] = q.xi(n - 1);
    traj.values[n - 1] = Mat2{};  // q vanishes right of the grid
    const double em = std::exp(-h);
    for (std::size_t j = n - 1; j-- > 0;) {
        const Mat2 q0 = symbol(q.samples[j]);
        const Mat2 q1 = symbol(q.samples[j + 1]);
        // O(x) = e^{-h} O(x+h) + int_0^h e^{-s} Q(x+s) ds, Q linear on the cell
        const double w0 = 1.0 - em;
        const double w1 = (1.0 - (1.0 + h) * em) / h;  // weight of the slope term
        traj.values[j] =
            traj.values[j + 1] * Complex(em) + q0 * Complex(w0) + (q1 - q0) * Complex(w1);
        traj.xi[j] = q.xi(j);
    }
    double sup = 0.0;
    for (const auto& v : traj.values) sup = std::max(sup, v.norm_hs());
    traj.det_residual = sup;
    return traj;
}

EquivalenceReport equivalence_report(const SampledPotential& q) {
    EquivalenceReport report;
    report.r_l2 = q.l2_norm();
    const double h = sobolev_norm(q, SobolevIndex(-1.0));
    report.h_fourier = h * h;
    report.h_smoothing = exp_smoothing(q).l2_sq;
    report.h_oscillation = oscillation_sum(q).total;
    report.k_tilde = ktilde(q).K_tilde;
    if (report.h_fourier > 0.0) {
        report.ratio_smoothing = report.h_smoothing / report.h_fourier;
        report.ratio_oscillation = report.h_oscillation / report.h_fourier;
        report.ratio_ktilde = report.k_tilde / report.h_fourier;
    }
    return report;
}

void save_equivalence_json(const EquivalenceReport& report, const std::string& path) {
    nlohmann::json j;
    j["h_fourier"] = report.h_fourier;
    j["h_smoothing"] = report.h_smoothing;
    j["h_oscillation"] = report.h_oscillation;
    j["k_tilde"] = report.k_tilde;
    j["l2_norm"] = report.r_l2;
    j["ratio_smoothing"] = report.ratio_smoothing;
    j["ratio_oscillation"] = report.ratio_oscillation;
    j["ratio_ktilde"] = report.ratio_ktilde;
    std::ofstream f(path);
    if (!f) throw Error("cannot open for writing: " + path);
    f << j.dump(2) << "\n";
}

void save_oscillation_csv(const OscillationSum& sum, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open for writing: " + path);
    f << "k,term\n";
    char buf[64];
    for (const auto& [k, term] : sum.terms) {
        std::snprintf(buf, sizeof buf, "%ld,%.17g\n", k, term);
        f << buf;
    }
}

}  // namespace nlscat
