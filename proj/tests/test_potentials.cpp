#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "nlscat/fourier.hpp"
#include "nlscat/potential.hpp"
#include "oracles.hpp"

using namespace nlscat;

namespace {

GridSpec small_grid() { return GridSpec{0.01, -10.24, 2048}; }

SampledPotential unit_gaussian() {
    return make_potential(PotentialFamily::gaussian, {{"amp", 1.0}, {"width", 1.0}},
                          small_grid());
}

}  // namespace

TEST_CASE("gaussian L2 norm matches the closed form") {
    const SampledPotential q = unit_gaussian();
    // || e^{-x^2/2} ||_2 = pi^{1/4}
    CHECK(q.l2_norm() == doctest::Approx(std::pow(M_PI, 0.25)).epsilon(1e-10));
    CHECK(q.max_abs() == doctest::Approx(1.0).epsilon(1e-14));

    const SampledPotential w = make_potential(
        PotentialFamily::gaussian, {{"amp", 0.7}, {"width", 1.1}, {"center", 0.5}}, small_grid());
    // || a e^{-((x-c)/w)^2/2} ||_2^2 = a^2 w sqrt(pi)
    CHECK(w.l2_norm() ==
          doctest::Approx(0.7 * std::sqrt(1.1 * std::sqrt(M_PI))).epsilon(1e-10));
}

TEST_CASE("gaussian L2 norm agrees with adaptive quadrature of the samples") {
    const SampledPotential q = make_potential(
        PotentialFamily::gaussian, {{"amp", 0.5}, {"width", 1.2}, {"center", -1.0}},
        small_grid());
    const double ref = oracles::integrate_d(
        [&](double x) { return std::norm(oracles::interp(q, x)); }, -10.0, 10.0);
    // node sum vs integral of the interpolant differ at O(dx^2 |q'|^2)
    CHECK(q.l2_norm() == doctest::Approx(std::sqrt(ref)).epsilon(2e-5));
}

TEST_CASE("box potential takes the requested value on the requested interval") {
    const SampledPotential q = make_potential(
        PotentialFamily::box, {{"amp", 0.25}, {"left", -1.0}, {"right", 2.0}}, small_grid());
    CHECK(q.support_lo == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(q.support_hi == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(q.max_abs() == doctest::Approx(0.25));
    // interior sample
    const std::size_t j = static_cast<std::size_t>((0.5 - q.xi0) / q.dx);
    CHECK(q.samples[j] == Complex(0.25, 0.0));
    // outside
    CHECK(q.samples[0] == Complex(0.0, 0.0));
}

TEST_CASE("support hints are tight and validate() enforces them") {
    SampledPotential q = unit_gaussian();
    CHECK_NOTHROW(q.validate());
    CHECK(q.support_lo < -5.0);
    CHECK(q.support_hi > 5.0);
    q.samples[0] = Complex(1e-3, 0.0);  // outside the declared support
    CHECK_THROWS_AS(q.validate(), ParamError);
}

TEST_CASE("parameter validation rejects bad inputs") {
    CHECK_THROWS_AS(make_potential(PotentialFamily::gaussian, {{"width", -1.0}}, small_grid()),
                    ParamError);
    CHECK_THROWS_AS(
        make_potential(PotentialFamily::box, {{"amp", 1.0}, {"left", 2.0}, {"right", 1.0}},
                       small_grid()),
        ParamError);
    CHECK_THROWS_AS(make_potential(PotentialFamily::box, {{"left", 0.0}, {"right", 1.0}},
                                   small_grid()),
                    ParamError);
    CHECK_THROWS_AS(family_from_string("sombrero"), ParamError);
}

TEST_CASE("symmetry operations transform norms as expected") {
    const SampledPotential q = unit_gaussian();
    const double l2 = q.l2_norm();

    SUBCASE("translate is exact sample reuse") {
        const SampledPotential t = translate(q, 3.0);
        CHECK(t.l2_norm() == doctest::Approx(l2).epsilon(1e-15));
        CHECK(t.xi0 == doctest::Approx(q.xi0 + 3.0));
        for (std::size_t j = 0; j < q.n(); j += 97) CHECK(t.samples[j] == q.samples[j]);
    }
    SUBCASE("dilate scales the L2 norm by sqrt(alpha)") {
        const double alpha = 2.0;
        const SampledPotential d = dilate(q, alpha);
        CHECK(d.l2_norm() == doctest::Approx(std::sqrt(alpha) * l2).epsilon(1e-12));
        CHECK(d.dx == doctest::Approx(q.dx / alpha));
    }
    SUBCASE("conjugate, rotate, modulate preserve the L2 norm") {
        CHECK(conjugate(q).l2_norm() == doctest::Approx(l2).epsilon(1e-15));
        CHECK(rotate(q, Complex(0.0, 1.0)).l2_norm() == doctest::Approx(l2).epsilon(1e-15));
        CHECK(modulate(q, 1.7).l2_norm() == doctest::Approx(l2).epsilon(1e-13));
    }
    SUBCASE("rotate rejects non-unimodular factors") {
        CHECK_THROWS_AS(rotate(q, Complex(2.0, 0.0)), ParamError);
    }
}

TEST_CASE("random bandlimited potentials are seed-deterministic") {
    const auto params =
        std::map<std::string, double>{{"amp", 0.5}, {"cutoff", 4.0}, {"envelope_width", 4.0}};
    const SampledPotential a =
        make_potential(PotentialFamily::random_bandlimited, params, small_grid(), 7);
    const SampledPotential b =
        make_potential(PotentialFamily::random_bandlimited, params, small_grid(), 7);
    const SampledPotential c =
        make_potential(PotentialFamily::random_bandlimited, params, small_grid(), 8);
    CHECK(a.samples == b.samples);
    CHECK(a.samples != c.samples);
    CHECK(a.max_abs() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("grid adequacy flags potentials that crowd the window") {
    const SampledPotential good =
        make_potential(PotentialFamily::gaussian, {{"amp", 1.0}, {"width", 1.0}}, GridSpec{});
    CHECK(grid_adequacy(good).ok);
    const SampledPotential wide = make_potential(
        PotentialFamily::box, {{"amp", 0.5}, {"left", -9.5}, {"right", 9.5}}, small_grid());
    CHECK_FALSE(grid_adequacy(wide).ok);  // support fraction and spectral tails both bad
}

TEST_CASE("potential CSV round trip preserves every sample bit-for-bit") {
    const SampledPotential q = make_potential(
        PotentialFamily::modulated_gaussian, {{"amp", 0.6}, {"width", 1.1}, {"beta", 2.0}},
        small_grid());
    const std::string path =
        (std::filesystem::temp_directory_path() / "nlscat_potential_roundtrip.csv").string();
    save_potential_csv(q, path);
    const SampledPotential back = load_potential_csv(path);
    REQUIRE(back.n() == q.n());
    CHECK(back.dx == doctest::Approx(q.dx).epsilon(1e-14));
    for (std::size_t j = 0; j < q.n(); ++j) {
        CHECK(back.samples[j].real() == q.samples[j].real());
        CHECK(back.samples[j].imag() == q.samples[j].imag());
    }
    std::filesystem::remove(path);
}

TEST_CASE("sobolev norm at s=0 reproduces the L2 norm") {
    const SampledPotential q = unit_gaussian();
    CHECK(sobolev_norm(q, SobolevIndex(0.0)) == doctest::Approx(q.l2_norm()).epsilon(1e-9));
}

TEST_CASE("H^-1 norm of the unit gaussian matches the closed form") {
    // For q = e^{-x^2/2}: Fq(eta) = e^{-eta^2/2} and
    // int e^{-eta^2}/(1+eta^2) d eta = pi e erfc(1).
    const SampledPotential q = unit_gaussian();
    const double closed = std::sqrt(M_PI * std::exp(1.0) * std::erfc(1.0));
    CHECK(sobolev_norm(q, SobolevIndex(-1.0)) == doctest::Approx(closed).epsilon(1e-8));
    CHECK(shifted_h_minus_one(q, 0.0) == doctest::Approx(closed).epsilon(1e-8));
}

TEST_CASE("H^-1 norm agrees with the quadrature oracle for an offset gaussian") {
    const SampledPotential q = make_potential(
        PotentialFamily::gaussian, {{"amp", 0.8}, {"width", 1.0}, {"center", 1.0}},
        small_grid());
    // |Fq(eta)|^2 = amp^2 w^2 e^{-w^2 eta^2} independent of the center
    const double a2w2 = 0.8 * 0.8;
    const double ref = oracles::integrate_d(
        [&](double eta) { return a2w2 * std::exp(-eta * eta) / (1.0 + eta * eta); },
        -60.0, 60.0);
    CHECK(sobolev_norm(q, SobolevIndex(-1.0)) == doctest::Approx(std::sqrt(ref)).epsilon(1e-8));
}

TEST_CASE("sobolev index range is enforced") {
    CHECK_THROWS_AS(SobolevIndex(-1.5), ParamError);
    CHECK_THROWS_AS(SobolevIndex(0.5), ParamError);
    CHECK_NOTHROW(SobolevIndex(-1.0));
    CHECK_NOTHROW(SobolevIndex(0.49));
}

TEST_CASE("fourier upsampling preserves original nodes and norms") {
    const SampledPotential q = unit_gaussian();
    const SampledPotential u = fourier_upsample(q, 4);
    REQUIRE(u.n() == 4 * q.n());
    CHECK(u.dx == doctest::Approx(q.dx / 4.0));
    double sup = 0.0;
    for (std::size_t j = 0; j < q.n(); ++j) sup = std::max(sup, std::abs(u.samples[4 * j] - q.samples[j]));
    CHECK(sup < 1e-10);
    CHECK(u.l2_norm() == doctest::Approx(q.l2_norm()).epsilon(1e-9));
}
