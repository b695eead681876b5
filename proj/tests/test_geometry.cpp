#include <cmath>
#include <random>

#include "doctest.h"
#include "rtm/geometry.hpp"

using namespace rtm;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("profile_eval builtin values") {
    const auto f1 = SurfaceProfile::f1();
    CHECK(profile_eval(f1, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(profile_eval(f1, 4.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(profile_eval(f1, 1.0) == doctest::Approx(0.6 * std::sin(0.6 * pi) * std::exp(16.0 / (1.0 - 16.0))).epsilon(1e-14));

    const auto f3 = SurfaceProfile::f3();
    CHECK(profile_eval(f3, 0.0) == doctest::Approx(-0.3));
    CHECK(profile_eval(f3, 3.5) == doctest::Approx(-0.2));
    CHECK(profile_eval(f3, 2.0) == doctest::Approx(0.0));

    const auto tab = SurfaceProfile::tabulated({-1.0, 0.0, 1.0}, {0.0, 0.5, 0.0});
    CHECK(profile_eval(tab, 0.5) == doctest::Approx(0.25));
    CHECK_THROWS_AS((void)profile_eval(tab, 2.0), std::out_of_range);

    // derivative of f1/f2 against central differences
    const auto f2 = SurfaceProfile::f2();
    for (double x : {-3.2, -1.1, 0.4, 2.9}) {
        const double h = 1e-6;
        for (const auto* p : {&f1, &f2}) {
            const double fd = (profile_eval(*p, x + h) - profile_eval(*p, x - h)) / (2 * h);
            CHECK(profile_deriv(*p, x) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("gammaR surface and above-test") {
    SpecialSurfaceGammaR g(10.0);
    CHECK(g.height(11.0) == doctest::Approx(0.0));
    CHECK(g.height(0.0) == doctest::Approx(-10.0));
    CHECK(g.above({0.0, -9.9}));
    CHECK(!g.above({0.0, -10.1}));
    CHECK(g.above({12.0, 0.1}));
    CHECK_THROWS_AS(SpecialSurfaceGammaR(-1.0), std::invalid_argument);
}

TEST_CASE("discretize_surface flat: node count and arclength") {
    const auto p = SurfaceProfile::flat(1.0);
    const auto c = discretize_surface(p, WaveNumber(2.0 * pi), 10.0, 1.0);
    CHECK(c.size() >= 40);
    CHECK(c.total_arclength == doctest::Approx(4.0).epsilon(1e-10));
    double sw = 0.0;
    for (const auto& n : c.nodes) {
        sw += n.weight;
        CHECK(n.weight > 0.0);
        CHECK(std::abs(norm(n.normal) - 1.0) <= 1e-12);
        CHECK(n.normal.x2 == doctest::Approx(1.0));
    }
    CHECK(sw == doctest::Approx(4.0).epsilon(1e-10));
    CHECK_THROWS_AS((void)discretize_surface(p, WaveNumber(1.0), 4.0, 1.0), std::invalid_argument);
}

TEST_CASE("discretize_surface gammaR dip: semicircle arclength") {
    const double R = 10.0, W = 2.0;
    const auto p = SurfaceProfile::gammaR_dip(R);
    const auto c = discretize_surface(p, WaveNumber(2.0), 8.0, W);
    CHECK(c.total_arclength == doctest::Approx(pi * R + 2.0 * W).epsilon(1e-6));
    // normals on the dip arc must point toward the origin side (upward into
    // the domain): at the bottom node the normal is ~(0,1)
    double best = 1e9;
    Vec2 bottom_normal{};
    for (const auto& n : c.nodes) {
        if (std::abs(n.pos.x1) < best) {
            best = std::abs(n.pos.x1);
            bottom_normal = n.normal;
        }
    }
    CHECK(bottom_normal.x2 == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("discretize_surface smooth profiles: refinement invariance and normals") {
    const auto p = SurfaceProfile::f1();
    const auto c1 = discretize_surface(p, WaveNumber(5.0), 8.0, 2.0);
    const auto c2 = discretize_surface(p, WaveNumber(5.0), 16.0, 2.0);
    CHECK(std::abs(c1.total_arclength - c2.total_arclength) <= 1e-8 * c1.total_arclength);

    // analytic normal (-f', 1)/sqrt(1+f'^2) at random nodes
    for (std::size_t i = 0; i < c1.size(); i += 17) {
        const auto& n = c1.nodes[i];
        const double fp = profile_deriv(p, n.pos.x1);
        const double s = std::sqrt(1.0 + fp * fp);
        CHECK(std::abs(n.normal.x1 - (-fp / s)) <= 1e-8);
        CHECK(std::abs(n.normal.x2 - 1.0 / s) <= 1e-8);
    }

    // observed convergence order of the arclength sum >= 2 under refinement
    // (midpoint-in-parameter node layout, exact interval weights)
    const auto c4 = discretize_surface(p, WaveNumber(5.0), 32.0, 2.0);
    const double ref = c4.total_arclength;
    CHECK(std::abs(c1.total_arclength - ref) <= 1e-8);
    CHECK(std::abs(c2.total_arclength - ref) <= 1e-8);
}

TEST_CASE("discretize_surface f3: jump points are resolved") {
    const auto p = SurfaceProfile::f3();
    const auto c = discretize_surface(p, WaveNumber(5.0), 10.0, 2.0, 3);
    // vertical jump segments contribute 2*(0.2+0.2+0.3) of arclength
    const double expect = 4.0 /*wings*/ + 8.0 /*horizontal*/ + 2.0 * (0.2 + 0.2 + 0.3);
    CHECK(c.total_arclength == doctest::Approx(expect).epsilon(1e-9));
    // some nodes on vertical pieces
    int vertical = 0;
    for (const auto& n : c.nodes)
        if (std::abs(n.normal.x2) < 1e-12) ++vertical;
    CHECK(vertical > 6);
}

TEST_CASE("acquisition layouts") {
    AcquisitionGeometry g;
    g.regime = Regime::Near;
    g.aperture = Aperture::UpperSemicircle;
    g.R_s = 10.0;
    g.R_r = 10.0;
    g.N_s = 2;
    g.N_r = 2;
    const auto a = acquisition_points(g);
    REQUIRE(a.sources.size() == 2);
    CHECK(a.source_angles[0] == doctest::Approx(pi / 4));
    CHECK(a.source_angles[1] == doctest::Approx(3 * pi / 4));
    for (const auto& s : a.sources) CHECK(std::abs(norm(s) - 10.0) <= 1e-12);

    AcquisitionGeometry gf;
    gf.regime = Regime::Far;
    gf.aperture = Aperture::UpperSemicircle;
    gf.N_s = 4;
    gf.N_r = 4;
    const auto af = acquisition_points(gf);
    CHECK(af.receiver_angles[0] == doctest::Approx(pi / 8));
    CHECK(af.receiver_angles[1] == doctest::Approx(3 * pi / 8));
    CHECK(af.receiver_angles[2] == doctest::Approx(5 * pi / 8));
    CHECK(af.receiver_angles[3] == doctest::Approx(7 * pi / 8));

    AcquisitionGeometry gc;
    gc.regime = Regime::Near;
    gc.aperture = Aperture::FullCircle;
    gc.R_s = 10.0;
    gc.R_r = 10.0;
    gc.N_s = 4;
    gc.N_r = 4;
    const auto ac = acquisition_points(gc);
    CHECK(ac.source_angles[0] == doctest::Approx(0.0));
    CHECK(ac.source_angles[1] == doctest::Approx(pi / 2));
    CHECK(ac.source_angles[2] == doctest::Approx(pi));
    CHECK(ac.source_angles[3] == doctest::Approx(3 * pi / 2));

    // with a background surface radius, on-interface angles move off it
    const auto an = acquisition_points(gc, 5.0);
    for (const auto& s : an.sources) CHECK(std::abs(s.x2) > 1e-6);
    CHECK_THROWS_AS((void)acquisition_points(gc, 12.0), std::invalid_argument);

    g.R_s = 12.0;  // R_s > R_r
    CHECK_THROWS_AS((void)acquisition_points(g), std::invalid_argument);
}

TEST_CASE("normalize_image") {
    ImageGrid g(0, 1, 0, 1, 2, 2);
    CHECK_THROWS_AS((void)normalize_image(g), std::invalid_argument);  // constant
    g.at(0, 0) = 0.0;
    g.at(0, 1) = 2.0;
    g.at(1, 0) = 1.0;
    g.at(1, 1) = 0.5;
    const auto n = normalize_image(g);
    CHECK(n.at(0, 0) == doctest::Approx(-1.0));
    CHECK(n.at(0, 1) == doctest::Approx(1.0));
    CHECK(n.raw_min == doctest::Approx(0.0));
    CHECK(n.raw_max == doctest::Approx(2.0));
    // argmax location invariant
    int am = 0;
    for (int i = 0; i < 4; ++i)
        if (g.values[i] > g.values[am]) am = i;
    int am2 = 0;
    for (int i = 0; i < 4; ++i)
        if (n.values[i] > n.values[am2]) am2 = i;
    CHECK(am == am2);
}

TEST_SUITE_END();
