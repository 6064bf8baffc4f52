#include "nlscat/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace nlscat {

namespace {

std::size_t node_index(const std::vector<double>& xi, double x, const char* what) {
    if (xi.size() < 2) throw GridError(std::string(what) + ": trace too short");
    const double dx = xi[1] - xi[0];
    const double idx = (x - xi[0]) / dx;
    const double rounded = std::round(idx);
    if (std::abs(idx - rounded) > 1e-6 || rounded < 0.0 ||
        rounded > static_cast<double>(xi.size() - 1))
        throw GridError(std::string(what) + ": coordinate " + std::to_string(x) +
                        " is not a grid node of the trace");
    return static_cast<std::size_t>(rounded);
}

}  // namespace

MatrixTrajectory szego_solution(const SampledPotential& q, double span_lo, double span_hi) {
    if (!(span_lo < span_hi)) throw ParamError("szego_solution: empty span");
    q.validate();
    const double lo = std::max(span_lo, q.xi0);
    const double hi = std::min(span_hi, q.xi_max());
    const std::size_t jl = static_cast<std::size_t>(std::floor((lo - q.xi0) / q.dx + 0.5));
    const std::size_t jh = static_cast<std::size_t>(std::floor((hi - q.xi0) / q.dx + 0.5));
    if (jh <= jl) throw GridError("szego_solution: span covers fewer than two nodes");

    MatrixTrajectory traj;
    traj.xi.resize(jh - jl + 1);
    traj.values.resize(jh - jl + 1);
    Mat2 m = Mat2::identity();
    traj.values[0] = m;
    traj.xi[0] = q.xi(jl);
    for (std::size_t j = jl; j < jh; ++j) {
        const Complex qc = 0.5 * (q.samples[j] + q.samples[j + 1]);
        const double re = qc.real(), im = qc.imag();
        // generator JQ = [[Re q, -Im q],[-Im q, -Re q]], real and trace-free
        const Mat2 gen{{Complex(re * q.dx), Complex(-im * q.dx), Complex(-im * q.dx),
                        Complex(-re * q.dx)}};
        Mat2 step = expm(gen);
        // the exponential of a real matrix is real; drop roundoff phantoms
        for (auto& e : step.m) e = Complex(e.real(), 0.0);
        m = step * m;
        traj.values[j - jl + 1] = m;
        traj.xi[j - jl + 1] = q.xi(j + 1);
    }
    // renormalize so N(0) = I
    const std::size_t j0 = node_index(traj.xi, 0.0, "szego_solution");
    const Mat2 norm = traj.values[j0].inverse();
    double res = 0.0;
    for (auto& v : traj.values) {
        v = v * norm;
        res = std::max(res, std::abs(v.det() - 1.0));
    }
    traj.det_residual = res;
    return traj;
}

MatrixTrajectory szego_solution(const SampledPotential& q) {
    return szego_solution(q, q.xi0, q.xi_max());
}

HamiltonianTrace hamiltonian(const MatrixTrajectory& N) {
    if (N.det_residual > 1e-6)
        throw ConsistencyError("hamiltonian: upstream det residual " +
                               std::to_string(N.det_residual));
    HamiltonianTrace trace;
    trace.xi = N.xi;
    trace.H.resize(N.values.size());
    double res = 0.0;
    for (std::size_t j = 0; j < N.values.size(); ++j) {
        const Mat2& n = N.values[j];
        const double n11 = n(0, 0).real(), n12 = n(0, 1).real();
        const double n21 = n(1, 0).real(), n22 = n(1, 1).real();
        const double h11 = n11 * n11 + n21 * n21;
        const double h12 = n11 * n12 + n21 * n22;
        const double h22 = n12 * n12 + n22 * n22;
        trace.H[j] = {h11, h12, h12, h22};
        res = std::max(res, std::abs(h11 * h22 - h12 * h12 - 1.0));
    }
    trace.det_residual = res;
    return trace;
}

EntropyReport ktilde(const HamiltonianTrace& H, long k_min, long k_max) {
    if (k_min > k_max) throw ParamError("ktilde: empty window range");
    EntropyReport report;
    const double dx = H.xi[1] - H.xi[0];
    const long per_window = std::lround(2.0 / dx);
    if (std::abs(per_window * dx - 2.0) > 1e-9 || per_window % 2 != 0)
        throw GridError("ktilde: grid spacing must divide the window length 2 evenly");

    double total = 0.0;
    for (long k = k_min; k <= k_max; ++k) {
        const std::size_t j0 = node_index(H.xi, static_cast<double>(k), "ktilde");
        if (j0 + static_cast<std::size_t>(per_window) > H.size() - 1)
            throw GridError("ktilde: window k=" + std::to_string(k) +
                            " extends beyond the trace");
        // composite Simpson over the window for each matrix entry
        double i11 = 0.0, i12 = 0.0, i22 = 0.0;
        for (long j = 0; j <= per_window; ++j) {
            const double w = (j == 0 || j == per_window) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            const auto& h = H.H[j0 + static_cast<std::size_t>(j)];
            i11 += w * h[0];
            i12 += w * h[1];
            i22 += w * h[3];
        }
        const double scale = dx / 3.0;
        i11 *= scale;
        i12 *= scale;
        i22 *= scale;
        const double term = i11 * i22 - i12 * i12 - 4.0;
        report.window_terms[k] = term;
        total += term;
    }
    report.K_tilde = total;
    return report;
}

std::pair<long, long> default_window_range(const SampledPotential& q) {
    // windows [k, k+2] that intersect the support, plus two guards each side
    const long k_lo = static_cast<long>(std::floor(q.support_lo)) - 3;
    const long k_hi = static_cast<long>(std::ceil(q.support_hi)) + 1;
    return {k_lo, k_hi};
}

EntropyReport ktilde(const SampledPotential& q) {
    const auto [k_lo, k_hi] = default_window_range(q);
    const MatrixTrajectory n = szego_solution(q);
    const HamiltonianTrace h = hamiltonian(n);
    return ktilde(h, k_lo, k_hi);
}

EntropyReport entropy_kq_report(const SampledPotential& q) {
    EntropyReport report;
    // the Wall-side point i corresponds to 2i in the Dirac variable
    const Complex z_dirac(0.0, 2.0);
    const Complex a_ode = a_upper_half(q, z_dirac);
    report.a_abs_ode = std::abs(a_ode);
    report.K_full = 2.0 * std::log(report.a_abs_ode);

    const ScatteringTable table = transition_coefficients(q, default_lambda_grid());
    const OuterResult outer = a_from_reflection(table.lambda_grid, table.r, z_dirac);
    report.a_abs_outer = std::abs(outer.value);
    report.outer_clamp_hits = outer.clamp_hits;
    report.route_rel_diff =
        std::abs(report.a_abs_ode - report.a_abs_outer) / std::max(report.a_abs_ode, 1e-300);
    if (report.route_rel_diff > 0.05)
        throw ConsistencyError("entropy routes disagree: |a| ODE " +
                               std::to_string(report.a_abs_ode) + " vs outer " +
                               std::to_string(report.a_abs_outer));
    return report;
}

double entropy_kq(const SampledPotential& q) { return entropy_kq_report(q).K_full; }

std::pair<Complex, Complex> weyl_pair(const SampledPotential& q, Complex z) {
    if (!(z.imag() > 0.0)) throw ParamError("weyl_pair: need Im z > 0");
    const WallLimits w = wall_limits(q, z, required_truncation(q));
    const Complex i(0.0, 1.0);
    const Complex m_plus = i * (w.a_plus - w.b_plus) / (w.a_plus + w.b_plus);
    const Complex m_minus = i * (w.a_minus - w.b_minus) / (w.a_minus + w.b_minus);
    if (!(m_plus.imag() > 0.0) || !(m_minus.imag() > 0.0))
        throw ConsistencyError("weyl_pair: numerical Herglotz violation");
    return {m_plus, m_minus};
}

namespace {

// Poisson integral (1/pi) int f(l) Im z / |l - z|^2 dl over the grid, with
// O(l^-2) tails fitted from the outer 10% of the grid.
double poisson_integral(const std::vector<double>& grid, const std::vector<double>& f,
                        Complex z) {
    const std::size_t n = grid.size();
    const double x = z.real(), y = z.imag();
    auto kernel = [&](double l) {
        const double d = l - x;
        return y / (d * d + y * y);
    };
    double integral = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double h = grid[j + 1] - grid[j];
        integral += 0.5 * h * (f[j] * kernel(grid[j]) + f[j + 1] * kernel(grid[j + 1]));
    }
    const std::size_t edge = std::max<std::size_t>(2, n / 10);
    auto fit_c = [&](bool left) {
        double acc = 0.0;
        for (std::size_t j = 0; j < edge; ++j) {
            const std::size_t k = left ? j : n - 1 - j;
            acc += f[k] * grid[k] * grid[k];
        }
        return acc / static_cast<double>(edge);
    };
    auto tail = [&](double c, double big_lambda, int sign) {
        // int over |l| > big_lambda of (c/l^2) kernel(l) dl, l = sign*big_lambda/u
        const int steps = 400;
        double acc = 0.0;
        for (int k = 0; k <= steps; ++k) {
            const double u = static_cast<double>(k) / steps;
            if (k == 0) continue;  // integrand -> 0 as u -> 0
            const double l = static_cast<double>(sign) * big_lambda / u;
            const double val = kernel(l);  // (c u^2/L^2) * kernel * (L/u^2) du
            acc += (k == steps ? 0.5 : 1.0) * val;
        }
        return acc * (c / big_lambda / static_cast<double>(steps));
    };
    double tails = 0.0;
    if (grid.back() > 0.0) tails += tail(fit_c(false), grid.back(), +1);
    if (-grid.front() > 0.0) tails += tail(fit_c(true), -grid.front(), -1);
    return (integral + tails) / M_PI;
}

}  // namespace

EntropyReport entropy_split(const SampledPotential& q, Complex z) {
    if (!(z.imag() > 0.0)) throw ParamError("entropy_split: need Im z > 0");
    EntropyReport report;
    const auto [m_plus, m_minus] = weyl_pair(q, z);

    const std::vector<double> grid = default_lambda_grid();
    const double trunc = required_truncation(q);
    std::vector<double> log_im_plus(grid.size()), log_im_minus(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const WallLimits w = wall_limits(q, Complex(grid[j], 0.0), trunc);
        // boundary values: Im m_pm(l) = |a_pm(l) + b_pm(l)|^-2
        log_im_plus[j] = -std::log(std::norm(w.a_plus + w.b_plus));
        log_im_minus[j] = -std::log(std::norm(w.a_minus + w.b_minus));
    }
    report.K_plus = std::log(m_plus.imag()) - poisson_integral(grid, log_im_plus, z);
    report.K_minus = std::log(m_minus.imag()) - poisson_integral(grid, log_im_minus, z);

    const double k_q = 2.0 * std::log(std::abs(a_upper_half(q, 2.0 * z)));
    report.K_full = k_q;
    const double det_im =
        std::log(4.0 * m_plus.imag() * m_minus.imag() / std::norm(m_plus + m_minus));
    report.splitting_residual = report.K_plus + report.K_minus - det_im - k_q;
    return report;
}

void save_entropy_json(const EntropyReport& report, const std::string& path) {
    nlohmann::json j;
    j["K_full"] = report.K_full;
    j["K_tilde"] = report.K_tilde;
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& [k, v] : report.window_terms) terms[std::to_string(k)] = v;
    j["window_terms"] = terms;
    j["K_plus"] = report.K_plus;
    j["K_minus"] = report.K_minus;
    j["splitting_residual"] = report.splitting_residual;
    j["routes"] = {{"a_abs_ode", report.a_abs_ode},
                   {"a_abs_outer", report.a_abs_outer},
                   {"rel_diff", report.route_rel_diff},
                   {"outer_clamp_hits", report.outer_clamp_hits}};
    std::ofstream f(path);
    if (!f) throw Error("cannot open for writing: " + path);
    f << j.dump(2) << "\n";
}

}  // namespace nlscat
