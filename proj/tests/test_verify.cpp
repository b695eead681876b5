#include <cmath>

#include "doctest.h"
#include "rtm/verify.hpp"

using namespace rtm;

namespace {

// degenerate reference surface: the flat line, with its closed-form image
// Green's function in place of the solved background
FieldSolver halfplane_solver(BoundaryKind kind, double k) {
    return [kind, k](Vec2 src) -> std::function<FieldValue(Vec2)> {
        return [kind, k, src](Vec2 x) { return halfplane_green(kind, WaveNumber(k), x, src); };
    };
}

}  // namespace

TEST_SUITE_BEGIN("verify");

TEST_CASE("helmholtz-kirchhoff on the flat degenerate surface") {
    const std::vector<std::pair<Vec2, Vec2>> pairs = {
        {{0.5, 1.0}, {-0.3, 1.5}}, {{-2.0, 0.7}, {1.8, 2.2}}, {{0.0, 0.4}, {3.0, 1.1}}};
    for (auto kind : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
        const auto rep = check_helmholtz_kirchhoff("hk-flat", halfplane_solver(kind, 5.0), 30.0,
                                                   false, pairs, 512, 1e-5);
        CAPTURE(rep.max_residual);
        CHECK(rep.pass);
    }
    // quadrature refinement drives the residual down until the identity floor
    const auto r1 = check_helmholtz_kirchhoff("hk", halfplane_solver(BoundaryKind::Dirichlet, 5.0),
                                              30.0, false, pairs, 256, 1.0);
    const auto r2 = check_helmholtz_kirchhoff("hk", halfplane_solver(BoundaryKind::Dirichlet, 5.0),
                                              30.0, false, pairs, 512, 1.0);
    CHECK(r2.max_residual <= r1.max_residual / 3.0 + 1e-9);
    CHECK_THROWS_AS((void)check_helmholtz_kirchhoff("hk", halfplane_solver(BoundaryKind::Dirichlet, 5.0),
                                                    10.0, false, pairs, 64, 1.0, 20.0),
                    std::invalid_argument);
}

TEST_CASE("helmholtz-kirchhoff residual symmetric under pair swap") {
    const auto solver = halfplane_solver(BoundaryKind::Dirichlet, 5.0);
    const std::vector<std::pair<Vec2, Vec2>> fwd = {{{0.5, 1.0}, {-0.3, 1.5}}};
    const std::vector<std::pair<Vec2, Vec2>> swp = {{{-0.3, 1.5}, {0.5, 1.0}}};
    const auto a = check_helmholtz_kirchhoff("hk", solver, 30.0, false, fwd, 512, 1.0);
    const auto b = check_helmholtz_kirchhoff("hk", solver, 30.0, false, swp, 512, 1.0);
    CHECK(std::abs(a.max_residual - b.max_residual) <= 1e-10);
}

TEST_CASE("remainder decay on the flat degenerate surface") {
    std::vector<Vec2> xs, zs;
    for (int i = 0; i < 5; ++i) {
        xs.push_back({-4.0 + 2.0 * i, 0.9});
        zs.push_back({4.0 - 2.0 * i, 0.3});
    }
    // oracle finding: the universal -1/(2r) radiation remainder has a real
    // coefficient, so its contributions cancel in the remainder integral and
    // the measured decay is one order faster than the bound rate; the frozen
    // window asserts the measured behavior
    const auto dec = check_remainder_decay("decay-flat", halfplane_solver(BoundaryKind::Dirichlet, 5.0),
                                           [](Vec2) { return 5.0; }, {30.0, 60.0, 120.0}, false,
                                           xs, zs, 4, -2.5, -1.0);
    CAPTURE(dec.slope);
    CAPTURE(dec.zeta_max[0]);
    CHECK(dec.report.pass);
    CHECK(dec.monotone);
    CHECK_THROWS_AS((void)check_remainder_decay("d", halfplane_solver(BoundaryKind::Dirichlet, 5.0),
                                                [](Vec2) { return 5.0; }, {30.0, 60.0}, false, xs,
                                                zs, 4, -1.5, -0.5),
                    std::invalid_argument);
}

TEST_CASE("reciprocity check on the closed-form image kernel") {
    const auto rep = check_reciprocity(
        "halfplane",
        [](Vec2 a, Vec2 b) { return halfplane_green(BoundaryKind::Dirichlet, WaveNumber(3.0), a, b).v; },
        {{{0.4, 1.0}, {2.0, 0.5}}, {{-1.0, 2.0}, {1.5, 3.0}}}, 1e-12);
    CHECK(rep.pass);
}

TEST_CASE("mixed reciprocity trivially passes when both sides vanish") {
    const auto rep = check_mixed_reciprocity(
        "flat", [](Vec2, Vec2) { return Complex(0.0); }, [](Vec2, Vec2) { return Complex(0.0); },
        {{0.0, 1.0}}, {{0.0, 5.0}}, 1e-2);
    CHECK(rep.pass);
    CHECK(rep.max_residual == 0.0);
}

TEST_CASE("report formatting") {
    IdentityReport r;
    r.name = "example";
    r.max_residual = 1.5e-4;
    r.threshold = 1e-3;
    r.pass = true;
    r.samples = 10;
    const auto tbl = format_report_table({r});
    CHECK(tbl.find("example") != std::string::npos);
    CHECK(tbl.find("yes") != std::string::npos);
    const auto mach = format_report_machine({r});
    CHECK(mach.find("pass") != std::string::npos);
}

TEST_SUITE_END();
