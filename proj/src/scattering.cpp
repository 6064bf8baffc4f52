#include "nlscat/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace nlscat {

namespace {

// Grid index of the coordinate origin; the scattering normalization Z(0)=I
// and the half-line splits all hinge on 0 being an actual node.
std::size_t origin_index(const SampledPotential& q) {
    const double idx = -q.xi0 / q.dx;
    const double rounded = std::round(idx);
    if (std::abs(idx - rounded) > 1e-6 || rounded < 0.0 ||
        rounded > static_cast<double>(q.n() - 1))
        throw GridError("potential grid does not contain the origin as a node");
    return static_cast<std::size_t>(rounded);
}

Mat2 dirac_generator(Complex q_cell, Complex lambda) {
    const Complex ihl = Complex(0.0, -0.5) * lambda;
    return Mat2{{ihl, std::conj(q_cell), q_cell, -ihl}};
}

}  // namespace

MatrixTrajectory fundamental_matrix(const SampledPotential& q, Complex lambda,
                                    double span_lo, double span_hi) {
    if (!(span_lo < span_hi)) throw ParamError("fundamental_matrix: empty span");
    q.validate();
    const std::size_t j0 = origin_index(q);
    // clip to grid nodes
    const double lo = std::max(span_lo, q.xi0);
    const double hi = std::min(span_hi, q.xi_max());
    const std::size_t jl = static_cast<std::size_t>(std::floor((lo - q.xi0) / q.dx + 0.5));
    const std::size_t jh = static_cast<std::size_t>(std::floor((hi - q.xi0) / q.dx + 0.5));
    if (jh <= jl) throw GridError("fundamental_matrix: span covers fewer than two nodes");
    if (j0 < jl || j0 > jh)
        throw GridError("fundamental_matrix: span must contain the origin");

    MatrixTrajectory traj;
    traj.lambda = lambda;
    traj.xi.resize(jh - jl + 1);
    traj.values.resize(jh - jl + 1);

    // forward cell products from the left edge, then renormalize at 0
    Mat2 m = Mat2::identity();
    traj.values[0] = m;
    traj.xi[0] = q.xi(jl);
    for (std::size_t j = jl; j < jh; ++j) {
        const Complex qc = 0.5 * (q.samples[j] + q.samples[j + 1]);
        m = expm(dirac_generator(qc, lambda) * Complex(q.dx)) * m;
        traj.values[j - jl + 1] = m;
        traj.xi[j - jl + 1] = q.xi(j + 1);
    }
    const Mat2 norm = traj.values[j0 - jl].inverse();
    double res = 0.0;
    for (auto& v : traj.values) {
        v = v * norm;
        res = std::max(res, std::abs(v.det() - 1.0));
    }
    traj.det_residual = res;
    return traj;
}

MatrixTrajectory fundamental_matrix(const SampledPotential& q, Complex lambda) {
    return fundamental_matrix(q, lambda, q.xi0, q.xi_max());
}

double required_truncation(const SampledPotential& q) {
    return std::max({q.support_hi, -q.support_lo, 0.0});
}

KreinCoefficient krein_coefficient(const SampledPotential& q, int side, double truncation) {
    if (side != 1 && side != -1) throw ParamError("krein_coefficient: side must be +1 or -1");
    const double needed = side == 1 ? std::max(q.support_hi, 0.0) : std::max(-q.support_lo, 0.0);
    if (truncation < needed - 1e-12)
        throw ParamError("krein_coefficient: truncation " + std::to_string(truncation) +
                         " is inside the support; need at least " + std::to_string(needed));
    const std::size_t j0 = origin_index(q);

    // Krein grid node j sits at xi = 2*j*dx and samples q at +-j*dx. One
    // extra node past the truncation keeps the straddling half-amplitude cell
    // (support edge -> first zero node) in the model, matching the full-grid
    // Dirac propagation bit for bit.
    const std::size_t want = static_cast<std::size_t>(std::ceil(truncation / q.dx - 1e-9)) + 1;
    const std::size_t avail = side == 1 ? q.n() - 1 - j0 : j0;
    const std::size_t m = std::min(want, avail);

    KreinCoefficient A;
    A.dx = 2.0 * q.dx;
    A.samples.resize(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        const Complex v = side == 1 ? q.samples[j0 + j] : q.samples[j0 - j];
        A.samples[j] = side == 1 ? -0.5 * std::conj(v) : 0.5 * v;
    }
    return A;
}

MatrixTrajectory krein_pair(const KreinCoefficient& A, Complex lambda) {
    const std::size_t n = A.samples.size();
    if (n < 1) throw ParamError("krein_pair: empty coefficient");

    MatrixTrajectory traj;
    traj.lambda = lambda;
    traj.xi.resize(n);
    traj.values.resize(n);

    const Complex il = Complex(0.0, 1.0) * lambda;
    std::array<Complex, 2> u{1.0, 1.0};   // (P, P_*)
    std::array<Complex, 2> v{1.0, 1.0};   // (Phat, Phat_*)
    traj.xi[0] = 0.0;
    traj.values[0] = Mat2{{u[0], v[0], u[1], v[1]}};

    double res = 0.0;
    Complex det_u = 1.0, det_v = 1.0;  // running propagator determinants
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const Complex Ac = 0.5 * (A.samples[j] + A.samples[j + 1]);
        const Mat2 step = expm(Mat2{{il, -std::conj(Ac), -Ac, 0.0}} * Complex(A.dx));
        const Mat2 step_hat = expm(Mat2{{il, std::conj(Ac), Ac, 0.0}} * Complex(A.dx));
        u = step.apply(u);
        v = step_hat.apply(v);
        traj.xi[j + 1] = A.dx * static_cast<double>(j + 1);
        traj.values[j + 1] = Mat2{{u[0], v[0], u[1], v[1]}};
        det_u *= step.det();
        det_v *= step_hat.det();
        const Complex expected = std::exp(il * traj.xi[j + 1]);
        res = std::max({res, std::abs(det_u - expected), std::abs(det_v - expected)});
    }
    traj.det_residual = res;
    return traj;
}

WallLimits wall_limits(const SampledPotential& q, Complex lambda, double truncation) {
    WallLimits w;
    for (int side : {1, -1}) {
        const KreinCoefficient A = krein_coefficient(q, side, truncation);
        if (A.samples.size() < 2) continue;  // empty half-line: free limits
        const MatrixTrajectory t = krein_pair(A, lambda);
        const Mat2& end = t.back();
        const Complex pstar = end(1, 0), phatstar = end(1, 1);
        const Complex a = 0.5 * (pstar + phatstar);
        const Complex b = 0.5 * (pstar - phatstar);
        if (side == 1) {
            w.a_plus = a;
            w.b_plus = b;
        } else {
            w.a_minus = a;
            w.b_minus = b;
        }
    }
    return w;
}

std::vector<double> default_lambda_grid(double radius, double step) {
    if (!(radius > 0.0) || !(step > 0.0)) throw ParamError("lambda grid: radius, step > 0");
    const long k = std::lround(radius / step);
    std::vector<double> grid;
    grid.reserve(2 * k + 1);
    for (long j = -k; j <= k; ++j) grid.push_back(step * static_cast<double>(j));
    return grid;
}

ScatteringTable transition_coefficients(const SampledPotential& q,
                                        const std::vector<double>& lambda_grid, int threads) {
    if (lambda_grid.empty()) throw ParamError("transition_coefficients: empty lambda grid");
    if (threads < 1) throw ParamError("transition_coefficients: threads must be >= 1");
    ScatteringTable table;
    table.lambda_grid = lambda_grid;
    table.truncation_radius = required_truncation(q);
    const std::size_t n = lambda_grid.size();
    table.a.resize(n);
    table.b.resize(n);
    table.r.resize(n);

    auto sweep = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j < hi; ++j) {
            const WallLimits w = wall_limits(q, Complex(0.5 * lambda_grid[j], 0.0),
                                             table.truncation_radius);
            const Complex a = w.a_plus * w.a_minus - w.b_plus * w.b_minus;
            const Complex b =
                w.a_minus * std::conj(w.b_plus) - w.b_minus * std::conj(w.a_plus);
            table.a[j] = a;
            table.b[j] = b;
            table.r[j] = b / a;
        }
    };
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (workers <= 1) {
        sweep(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t lo = n * w / workers;
            const std::size_t hi = n * (w + 1) / workers;
            pool.emplace_back(sweep, lo, hi);
        }
        for (auto& t : pool) t.join();
    }
    // serial reduction keeps the result independent of the thread count
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        worst = std::max(worst, std::abs(std::norm(table.a[j]) - std::norm(table.b[j]) - 1.0));
    table.max_unitarity_residual = worst;
    if (worst > 1e-6)
        throw ConsistencyError("transition_coefficients: unitarity residual " +
                               std::to_string(worst));
    table.a_at_i = a_upper_half(q, Complex(0.0, 1.0));
    return table;
}

Complex a_upper_half(const SampledPotential& q, Complex z, double truncation) {
    if (!(z.imag() > 0.0)) throw ParamError("a_upper_half: need Im z > 0");
    const WallLimits w = wall_limits(q, 0.5 * z, truncation);
    return w.a_plus * w.a_minus - w.b_plus * w.b_minus;
}

Complex a_upper_half(const SampledPotential& q, Complex z) {
    return a_upper_half(q, z, required_truncation(q));
}

OuterResult a_from_reflection(const std::vector<double>& lambda_grid,
                              const std::vector<Complex>& r, Complex z) {
    if (lambda_grid.size() != r.size() || lambda_grid.size() < 4)
        throw ParamError("a_from_reflection: grid/values size mismatch or too short");
    if (!(z.imag() > 0.0)) throw ParamError("a_from_reflection: need Im z > 0");

    const std::size_t n = lambda_grid.size();
    OuterResult out;
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double m = std::norm(r[j]);
        if (m >= 1.0) throw ParamError("a_from_reflection: |r| >= 1 at lambda = " +
                                       std::to_string(lambda_grid[j]));
        double v = std::log1p(-m);
        if (v < -50.0) {
            v = -50.0;
            ++out.clamp_hits;
        }
        f[j] = v;
    }

    // trapezoid over the grid
    Complex integral = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double h = lambda_grid[j + 1] - lambda_grid[j];
        const Complex g0 = f[j] / (lambda_grid[j] - z);
        const Complex g1 = f[j + 1] / (lambda_grid[j + 1] - z);
        integral += 0.5 * h * (g0 + g1);
    }

    // O(lambda^-2) tails: fit c from the outer 10% of the grid on each side,
    // then integrate c/l^2/(l - z) on the substituted variable u = Lambda/|l|.
    const std::size_t edge = std::max<std::size_t>(2, n / 10);
    auto fit_c = [&](bool left) {
        double acc = 0.0;
        std::size_t cnt = 0;
        for (std::size_t j = 0; j < edge; ++j) {
            const std::size_t k = left ? j : n - 1 - j;
            acc += f[k] * lambda_grid[k] * lambda_grid[k];
            ++cnt;
        }
        return acc / static_cast<double>(cnt);
    };
    const double c_left = fit_c(true), c_right = fit_c(false);
    const double lam_left = -lambda_grid.front(), lam_right = lambda_grid.back();
    auto tail = [&](double c, double big_lambda, int sign) {
        // integral over |l| > big_lambda on the given side of c/l^2/(l - z),
        // substituting l = sign * big_lambda / u, u in (0, 1]
        const int steps = 400;
        Complex acc = 0.0;
        for (int k = 0; k <= steps; ++k) {
            const double u = static_cast<double>(k) / steps;
            const Complex denom = static_cast<double>(sign) * big_lambda - u * z;
            const Complex val = u / denom;  // u -> 0 limit is 0
            acc += (k == 0 || k == steps) ? 0.5 * val : val;
        }
        return acc * (c / big_lambda / static_cast<double>(steps));
    };
    Complex tails = 0.0;
    if (lam_right > 0.0) tails += tail(c_right, lam_right, +1);
    if (lam_left > 0.0) tails += tail(c_left, lam_left, -1);
    out.tail_magnitude = std::abs(tails) / (2.0 * M_PI);

    const Complex log_a = -(integral + tails) / Complex(0.0, 2.0 * M_PI);
    out.value = std::exp(log_a);
    return out;
}

void save_scattering_csv(const ScatteringTable& table, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw Error("cannot open for writing: " + path);
    char buf[256];
    std::snprintf(buf, sizeof buf, "# truncation_radius=%.17g max_unitarity_residual=%.17g\n",
                  table.truncation_radius, table.max_unitarity_residual);
    file << buf;
    file << "lambda,re_a,im_a,re_b,im_b,re_r,im_r\n";
    for (std::size_t j = 0; j < table.lambda_grid.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      table.lambda_grid[j], table.a[j].real(), table.a[j].imag(),
                      table.b[j].real(), table.b[j].imag(), table.r[j].real(),
                      table.r[j].imag());
        file << buf;
    }
}

}  // namespace nlscat
