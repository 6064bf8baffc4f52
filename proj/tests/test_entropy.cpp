#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlscat/entropy.hpp"
#include "oracles.hpp"

using namespace nlscat;

namespace {

GridSpec small_grid() { return GridSpec{0.01, -10.24, 2048}; }

SampledPotential narrow_gaussian(double amp = 0.6) {
    return make_potential(PotentialFamily::gaussian, {{"amp", amp}, {"width", 0.6}},
                          small_grid());
}

Mat2 dirac_G(Complex lambda, Complex qv) {
    const Complex ihl = Complex(0.0, -0.5) * lambda;
    return Mat2{{ihl, std::conj(qv), qv, -ihl}};
}

// Jost-route a(z) assembled with the test-side Taylor exponential.
Complex oracle_a(const SampledPotential& q, Complex z) {
    Mat2 m = Mat2::identity();
    std::size_t jl = 0, jh = q.n() - 1;
    while (jl + 1 < jh && q.xi(jl + 1) < q.support_lo) ++jl;
    while (jh > jl + 1 && q.xi(jh - 1) > q.support_hi) --jh;
    for (std::size_t j = jl; j < jh; ++j) {
        const Complex qc = 0.5 * (q.samples[j] + q.samples[j + 1]);
        m = oracles::expm_taylor(dirac_G(z, qc) * Complex(q.dx)) * m;
    }
    const double xl = q.xi(jl), xr = q.xi(jh);
    const Complex half_i = Complex(0.0, 0.5) * z;
    const Mat2 e_l = Mat2::diag(std::exp(-half_i * xl), std::exp(half_i * xl));
    const Mat2 e_r_inv = Mat2::diag(std::exp(half_i * xr), std::exp(-half_i * xr));
    return (e_r_inv * m * e_l)(0, 0);
}

}  // namespace

TEST_CASE("Szego solution is real with unit determinant") {
    const SampledPotential q = make_potential(
        PotentialFamily::modulated_gaussian, {{"amp", 0.7}, {"width", 0.6}, {"beta", 1.0}},
        small_grid());
    const MatrixTrajectory n = szego_solution(q);
    CHECK(n.det_residual < 1e-10);
    for (std::size_t j = 0; j < n.size(); j += 101)
        for (const auto& e : n.values[j].m) CHECK(e.imag() == 0.0);
}

TEST_CASE("zero potential gives the identity Hamiltonian and vanishing functionals") {
    const SampledPotential q = make_potential(PotentialFamily::zero, {}, small_grid());
    const HamiltonianTrace h = hamiltonian(szego_solution(q));
    CHECK(h.det_residual == 0.0);
    for (std::size_t j = 0; j < h.size(); j += 64) {
        CHECK(h.H[j][0] == 1.0);
        CHECK(h.H[j][1] == 0.0);
        CHECK(h.H[j][3] == 1.0);
    }
    const EntropyReport r = ktilde(h, -3, 1);
    CHECK(std::abs(r.K_tilde) < 1e-12);
}

TEST_CASE("single-window functional matches the constant-coefficient closed form") {
    // real constant q = 1/2 on [0, 2]: N = diag(e^{x/2}, e^{-x/2}), so
    // det int_0^2 H = sinh^2(1)/(1/4) and the window term is 4 sinh^2(1) - 4
    const SampledPotential q = make_potential(
        PotentialFamily::box, {{"amp", 0.5}, {"left", 0.0}, {"right", 2.0}}, small_grid());
    const HamiltonianTrace h = hamiltonian(szego_solution(q));
    const EntropyReport r = ktilde(h, 0, 0);
    const double closed = 4.0 * std::sinh(1.0) * std::sinh(1.0) - 4.0;
    CHECK(r.window_terms.at(0) == doctest::Approx(closed).epsilon(1e-8));
    // windows fully outside the support vanish identically
    const EntropyReport far = ktilde(h, -4, -3);
    CHECK(std::abs(far.window_terms.at(-4)) < 1e-12);
    CHECK(std::abs(far.window_terms.at(-3)) < 1e-12);
}

TEST_CASE("window functional is invariant under SL(2,R) frame changes") {
    const SampledPotential q = narrow_gaussian();
    const HamiltonianTrace h = hamiltonian(szego_solution(q));
    const EntropyReport base = ktilde(h, -3, 3);

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 10; ++trial) {
        // S = [[a, b],[c, (1 + b c)/a]] has det 1 by construction
        double a = 0.0;
        do { a = u(rng); } while (std::abs(a) < 0.2);
        const double b = u(rng), c = u(rng);
        const double d = (1.0 + b * c) / a;
        HamiltonianTrace ht = h;
        for (auto& e : ht.H) {
            const double h11 = e[0], h12 = e[1], h22 = e[3];
            // S^T H S
            const double t11 = a * (a * h11 + c * h12) + c * (a * h12 + c * h22);
            const double t12 = b * (a * h11 + c * h12) + d * (a * h12 + c * h22);
            const double t22 = b * (b * h11 + d * h12) + d * (b * h12 + d * h22);
            e = {t11, t12, t12, t22};
        }
        const EntropyReport rot = ktilde(ht, -3, 3);
        for (const auto& [k, term] : base.window_terms)
            CHECK(rot.window_terms.at(k) ==
                  doctest::Approx(term).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("entropy agrees between the ODE route and the Jost oracle") {
    const SampledPotential q = narrow_gaussian(0.8);
    const Complex a_lib = a_upper_half(q, Complex(0.0, 2.0));
    const Complex a_ref = oracle_a(q, Complex(0.0, 2.0));
    CHECK(std::abs(a_lib - a_ref) < 1e-8 * std::abs(a_ref));
    CHECK(std::log(std::abs(a_lib)) > 0.0);  // outer: |a(z)| >= 1 off the real line
}

TEST_CASE("entropy dual route stays within one percent") {
    const SampledPotential q = narrow_gaussian();
    const EntropyReport r = entropy_kq_report(q);
    CHECK(r.route_rel_diff < 0.01);
    CHECK(r.K_full == doctest::Approx(2.0 * std::log(r.a_abs_ode)));
    CHECK(r.K_full > 0.0);
}

TEST_CASE("Weyl functions are Herglotz and free for the zero potential") {
    const SampledPotential zero = make_potential(PotentialFamily::zero, {}, small_grid());
    const auto [mp0, mm0] = weyl_pair(zero, Complex(0.0, 1.0));
    CHECK(std::abs(mp0 - Complex(0.0, 1.0)) < 1e-12);
    CHECK(std::abs(mm0 - Complex(0.0, 1.0)) < 1e-12);

    const SampledPotential q = narrow_gaussian();
    const auto [mp, mm] = weyl_pair(q, Complex(0.3, 0.8));
    CHECK(mp.imag() > 0.0);
    CHECK(mm.imag() > 0.0);
}

TEST_CASE("half-line splitting identity closes") {
    const SampledPotential q = narrow_gaussian();
    const EntropyReport r = entropy_split(q, Complex(0.0, 1.0));
    CHECK(r.K_plus >= -1e-12);   // relative entropies are nonnegative
    CHECK(r.K_minus >= -1e-12);
    CHECK(std::abs(r.splitting_residual) < 1e-3);
}

TEST_CASE("window grids and ranges are validated") {
    const SampledPotential q = narrow_gaussian();
    const HamiltonianTrace h = hamiltonian(szego_solution(q));
    CHECK_THROWS_AS(ktilde(h, 2, 1), ParamError);
    CHECK_THROWS_AS(ktilde(h, -40, -39), GridError);  // outside the trace
    const SampledPotential bad = make_potential(
        PotentialFamily::gaussian, {{"amp", 0.5}, {"width", 0.5}},
        GridSpec{0.003, -6.144, 4096});
    CHECK_THROWS_AS(ktilde(bad), GridError);  // 0.003 does not divide 2
}
