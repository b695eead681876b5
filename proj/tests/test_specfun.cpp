#include <cmath>
#include <random>

#include "doctest.h"
#include "rtm/specfun.hpp"

using namespace rtm;

namespace {

// Independent ascending-series oracle for J0/J1 (converges to machine
// precision for moderate x; used to freeze expected values).
double j_series(int n, double x) {
    const double q = 0.25 * x * x;
    double term = (n == 0) ? 1.0 : 0.5 * x;
    double sum = term;
    for (int k = 1; k <= 80; ++k) {
        term *= -q / (k * (k + static_cast<double>(n)));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Series-with-log oracle for Y0.
double y0_series(double x) {
    const double gamma = 0.57721566490153286;
    const double q = 0.25 * x * x;
    double sum = 0.0, hk = 0.0, term = 1.0;
    for (int k = 1; k <= 80; ++k) {
        hk += 1.0 / k;
        term *= q / (k * static_cast<double>(k));
        sum += (k % 2 == 1 ? term : -term) * hk;
    }
    return (2.0 / rtm::pi) * ((std::log(0.5 * x) + gamma) * j_series(0, x) + sum);
}

}  // namespace

TEST_SUITE_BEGIN("specfun");

TEST_CASE("bessel_j trivial and series values") {
    CHECK(bessel_j(0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bessel_j(1, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    // frozen from the ascending-series oracle
    CHECK(j_series(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-14));
    CHECK(bessel_j(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-13));
    // oracle agreement: tight where the series is machine-exact, absolute
    // tolerance above (the oracle itself loses digits to cancellation there)
    for (double x : {0.3, 2.7, 8.0, 11.0}) {
        CHECK(bessel_j(0, x) == doctest::Approx(j_series(0, x)).epsilon(2e-12));
        CHECK(bessel_j(1, x) == doctest::Approx(j_series(1, x)).epsilon(2e-12));
    }
    for (double x : {12.5, 13.999, 14.001, 16.0, 19.5}) {
        CHECK(std::abs(bessel_j(0, x) - j_series(0, x)) <= 1e-9);
        CHECK(std::abs(bessel_j(1, x) - j_series(1, x)) <= 1e-9);
    }
    // large-argument spot checks (frozen from an independent implementation)
    CHECK(bessel_j(0, 100.0) == doctest::Approx(0.01998585030422333).epsilon(1e-11));
    CHECK(bessel_j(0, 9999.0) == doctest::Approx(-0.0007645874860349287).epsilon(1e-9));
    CHECK_THROWS_AS((void)bessel_j(2, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)bessel_j(0, -1.0), std::domain_error);
}

TEST_CASE("bessel_y values, small-argument trend, Wronskian") {
    CHECK(y0_series(1.0) == doctest::Approx(0.08825696421567697).epsilon(1e-13));
    CHECK(bessel_y(0, 1.0) == doctest::Approx(0.08825696421567697).epsilon(1e-12));
    CHECK(bessel_y(0, 15.0) == doctest::Approx(0.20546429603891825).epsilon(1e-10));
    CHECK(bessel_y(1, 100.0) == doctest::Approx(-0.02037231200275932).epsilon(1e-9));
    CHECK(bessel_y(0, 1e-8) < -11.0);
    CHECK_THROWS_AS((void)bessel_y(0, 0.0), std::domain_error);
    CHECK_THROWS_AS((void)bessel_y(0, -2.0), std::domain_error);

    // J1(x)Y0(x) - J0(x)Y1(x) = 2/(pi x) to 1e-10 relative on [0.1, 100]
    for (int i = 0; i <= 60; ++i) {
        const double x = 0.1 * std::pow(1000.0, i / 60.0);
        const double w = bessel_j(1, x) * bessel_y(0, x) - bessel_j(0, x) * bessel_y(1, x);
        const double expect = 2.0 / (rtm::pi * x);
        CHECK(std::abs(w - expect) <= 1e-10 * expect);
    }
    const double w2 = bessel_j(1, 2.0) * bessel_y(0, 2.0) - bessel_j(0, 2.0) * bessel_y(1, 2.0);
    CHECK(w2 == doctest::Approx(0.3183098861837907).epsilon(1e-12));
}

TEST_CASE("hankel1 composition, asymptote, singularity") {
    const Complex h = hankel1(0, 1.0);
    CHECK(h.real() == doctest::Approx(0.7651976865579666).epsilon(1e-12));
    CHECK(h.imag() == doctest::Approx(0.08825696421567697).epsilon(1e-12));
    // conjugation structure: imaginary part is Y_n by construction
    for (double x : {0.5, 3.0, 40.0}) {
        CHECK(hankel1(1, x).imag() == doctest::Approx(bessel_y(1, x)).epsilon(1e-14));
        CHECK(hankel1(1, x).real() == doctest::Approx(bessel_j(1, x)).epsilon(1e-14));
    }
    // |H0(x)| sqrt(x) -> sqrt(2/pi) within 1e-3 at x = 500
    CHECK(std::abs(hankel1(0, 500.0)) * std::sqrt(500.0) ==
          doctest::Approx(std::sqrt(2.0 / rtm::pi)).epsilon(1e-3));
    CHECK_THROWS_AS((void)hankel1(0, 0.0), std::domain_error);
}

TEST_CASE("phi value, symmetry, Helmholtz residual, gradient") {
    const WaveNumber k1(1.0);
    // (i/4) H0(1): frozen from the J/Y oracles
    const Complex v = phi(k1, {0.0, 0.0}, {1.0, 0.0});
    CHECK(v.real() == doctest::Approx(-0.0220642410539192).epsilon(1e-10));
    CHECK(v.imag() == doctest::Approx(0.1912994216394916).epsilon(1e-10));
    CHECK_THROWS_AS((void)phi(k1, {1.0, 2.0}, {1.0, 2.0}), std::domain_error);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const WaveNumber k(2.0);
    for (int i = 0; i < 20; ++i) {
        Vec2 x{u(rng), u(rng)}, y{u(rng), u(rng)};
        if (dist(x, y) < 0.1) continue;
        const Complex a = phi(k, x, y), b = phi(k, y, x);
        CHECK(std::abs(a - b) <= 1e-14 * std::abs(a));
    }

    // discrete Helmholtz residual: 5-point Laplacian + k^2 phi at distance
    // >= 1 from the source, step 1e-3, 100 random points
    const double hstep = 1e-3;
    for (int i = 0; i < 100; ++i) {
        Vec2 y{u(rng), u(rng)};
        Vec2 x{u(rng) + 4.0, u(rng) + 4.0};
        if (dist(x, y) < 1.0) continue;
        const Complex c = phi(k, x, y);
        const Complex lap = (phi(k, {x.x1 + hstep, x.x2}, y) + phi(k, {x.x1 - hstep, x.x2}, y) +
                             phi(k, {x.x1, x.x2 + hstep}, y) + phi(k, {x.x1, x.x2 - hstep}, y) -
                             4.0 * c) /
                            (hstep * hstep);
        CHECK(std::abs(lap + k.value * k.value * c) <= 1e-4 * std::abs(c));
    }

    // gradient vs central differences at offsets >= 0.5 wavelengths
    const double fd = 1e-6;
    for (int i = 0; i < 30; ++i) {
        Vec2 y{u(rng), u(rng)};
        Vec2 x{y.x1 + 2.0 + u(rng) * 0.3, y.x2 + 2.0 + u(rng) * 0.3};
        const CVec2 g = phi_grad(k, x, y);
        const Complex g1 = (phi(k, {x.x1 + fd, x.x2}, y) - phi(k, {x.x1 - fd, x.x2}, y)) / (2 * fd);
        const Complex g2 = (phi(k, {x.x1, x.x2 + fd}, y) - phi(k, {x.x1, x.x2 - fd}, y)) / (2 * fd);
        CHECK(std::abs(g.x1 - g1) <= 1e-6 * std::abs(g.x1) + 1e-12);
        CHECK(std::abs(g.x2 - g2) <= 1e-6 * std::abs(g.x2) + 1e-12);
    }
}

TEST_SUITE_END();
