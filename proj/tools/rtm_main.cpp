// Command-line front end: synthetic data generation, reverse-time-migration
// imaging, identity self-tests, field probes, and heatmap rendering.
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure, 4 I/O error.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "rtm/backgrounds.hpp"
#include "rtm/config.hpp"
#include "rtm/forward.hpp"
#include "rtm/imaging.hpp"
#include "rtm/io.hpp"
#include "rtm/specfun.hpp"
#include "rtm/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace rtm;

struct CommonOpts {
    std::string config;
    std::string preset;
    int threads = 0;
    long long seed = -1;
};

RunConfig resolve_config(const CommonOpts& o) {
    RunConfig cfg;
    if (!o.preset.empty()) cfg.apply_preset(o.preset);
    if (!o.config.empty()) cfg.load_file(o.config);
    if (o.seed >= 0) cfg.set("noise.seed", std::to_string(o.seed), "flag");
#ifdef _OPENMP
    if (o.threads > 0) omp_set_num_threads(o.threads);
#endif
    std::cout << cfg.resolved_listing();
    return cfg;
}

int cmd_forward(const CommonOpts& o, const std::string& out_path) {
    const RunConfig cfg = resolve_config(o);
    const ForwardConfig fc = cfg.make_forward();
    const auto t0 = std::chrono::steady_clock::now();
    const ScatterData d = synthesize_data(fc);
    const auto t1 = std::chrono::steady_clock::now();
    write_scatter_data(d, out_path);
    std::printf("data: %d x %d entries, Frobenius norm %.6e\n", d.N_r, d.N_s, d.frobenius());
    std::printf("timing: synthesis %.2f s\n", std::chrono::duration<double>(t1 - t0).count());
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_image(const CommonOpts& o, const std::string& data_path, const std::string& out_path,
              const std::string& regime_flag, const std::string& render_path) {
    RunConfig cfg;
    if (!o.preset.empty()) cfg.apply_preset(o.preset);
    if (!o.config.empty()) cfg.load_file(o.config);
    if (!regime_flag.empty()) cfg.set("acquisition.regime", regime_flag, "flag");
#ifdef _OPENMP
    if (o.threads > 0) omp_set_num_threads(o.threads);
#endif
    std::cout << cfg.resolved_listing();

    const ScatterData d = read_scatter_data(data_path);
    cfg.check_data_header(d);
    const IndicatorConfig ic = cfg.make_indicator();
    const auto t0 = std::chrono::steady_clock::now();
    const ImageGrid g = compute_indicator(d, ic);
    const auto t1 = std::chrono::steady_clock::now();
    write_image_grid(g, out_path);
    std::printf("timing: imaging %.2f s\n", std::chrono::duration<double>(t1 - t0).count());
    std::printf("wrote %s\n", out_path.c_str());

    const bool nadir = d.kind == SurfaceKind::Neumann;
    int b1 = 0, b2 = 0;
    for (int i1 = 0; i1 < g.n1; ++i1)
        for (int i2 = 0; i2 < g.n2; ++i2) {
            const bool better = nadir ? g.at(i1, i2) < g.at(b1, b2) : g.at(i1, i2) > g.at(b1, b2);
            if (better) {
                b1 = i1;
                b2 = i2;
            }
        }
    std::printf("summary: global %s at (%.4f, %.4f), value %.6e\n",
                nadir ? "argmin (nadir)" : "argmax (peak)", g.x1(b1), g.x2(b2), g.at(b1, b2));

    if (!render_path.empty()) {
        try {
            const ImageGrid gn = normalize_image(g);
            const SurfaceProfile prof = cfg.make_profile();
            write_pgm(gn, render_path, &prof);
            std::printf("wrote %s\n", render_path.c_str());
        } catch (const std::invalid_argument& e) {
            std::printf("render skipped: %s\n", e.what());
        }
    }
    return 0;
}

int run_selftest(const CommonOpts& o, const std::string& level) {
    RunConfig cfg;
    if (!o.preset.empty()) cfg.apply_preset(o.preset);
    if (!o.config.empty()) cfg.load_file(o.config);
#ifdef _OPENMP
    if (o.threads > 0) omp_set_num_threads(o.threads);
#endif
    std::vector<IdentityReport> reports;

    {
        IdentityReport r;
        r.name = "specfun-wronskian";
        r.threshold = 1e-10;
        for (int i = 0; i <= 40; ++i) {
            const double x = 0.1 * std::pow(1000.0, i / 40.0);
            const double wv = bessel_j(1, x) * bessel_y(0, x) - bessel_j(0, x) * bessel_y(1, x);
            r.max_residual =
                std::max(r.max_residual, std::abs(wv - 2.0 / (pi * x)) / (2.0 / (pi * x)));
        }
        r.samples = 41;
        r.pass = r.max_residual <= r.threshold;
        reports.push_back(r);
    }
    {
        IdentityReport r;
        r.name = "geometry-arclength";
        r.threshold = 1e-8;
        const auto c =
            discretize_surface(SurfaceProfile::gammaR_dip(10.0), WaveNumber(2.0), 8.0, 2.0);
        r.max_residual = std::abs(c.total_arclength - (pi * 10.0 + 4.0)) / (pi * 10.0 + 4.0);
        r.samples = static_cast<int>(c.size());
        r.pass = r.max_residual <= r.threshold;
        reports.push_back(r);
    }
    {
        IdentityReport r;
        r.name = "flat-image-oracle";
        r.threshold = 1e-4;
        const WaveNumber k(5.0);
        const auto curve = discretize_surface(SurfaceProfile::flat(2.0), k, 10.0, 2.0);
        for (auto kind : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
            auto op = std::make_shared<BoundaryIntegralOperator>(curve, kind, k);
            const Vec2 xs{0.4, 2.0};
            const auto sol = solve_impenetrable_pointsource(op, xs);
            const double s = kind == BoundaryKind::Dirichlet ? -1.0 : 1.0;
            for (int i = 0; i < 10; ++i) {
                const Vec2 x{-2.0 + 0.45 * i, 1.0 + 0.2 * i};
                const Complex expect = s * phi(k, x, {xs.x1, -xs.x2});
                r.max_residual = std::max(
                    r.max_residual, std::abs(sol.scattered(x).v - expect) / std::abs(expect));
            }
        }
        r.samples = 20;
        r.pass = r.max_residual <= r.threshold;
        reports.push_back(r);
    }

    if (level == "full") {
        const double k1 = cfg.get_num("medium.kappa1");
        const double k2 = cfg.get_num("medium.kappa2");
        const double R = cfg.get_num("surface.R");
        const double npw = cfg.get_num("solver.background_nodes_per_wavelength");
        const int gl = cfg.get_int("solver.grading_levels");
        std::vector<std::pair<Vec2, Vec2>> pairs;
        for (int i = 0; i < 10; ++i) {
            const double t = i / 9.0;
            pairs.push_back({{-4.0 + 8.0 * t, -0.8 + 1.6 * t}, {3.5 - 7.0 * t, 1.2 - 1.7 * t}});
        }
        for (auto kind : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
            const auto bg = std::make_shared<GammaRBackground>(kind, WaveNumber(k1), R, npw, gl);
            FieldSolver solver = [bg](Vec2 src) -> std::function<FieldValue(Vec2)> {
                auto sol = std::make_shared<GammaRBackground::Solution>(bg->solve(src));
                return [sol](Vec2 x) { return sol->total(x); };
            };
            const char tag = kind == BoundaryKind::Dirichlet ? 'D' : 'N';
            reports.push_back(check_helmholtz_kirchhoff(std::string("helmholtz-kirchhoff-") + tag,
                                                        solver, 1.5 * R, false, pairs, 1024, 1e-3,
                                                        R));
            std::vector<Vec2> xs, zs;
            for (int i = 0; i < 5; ++i) {
                xs.push_back({-4.0 + 2.0 * i, 0.9});
                zs.push_back({4.0 - 2.0 * i, -0.6});
            }
            const auto dec = check_remainder_decay(
                std::string("remainder-decay-") + tag, solver, [k1](Vec2) { return k1; },
                {1.5 * R, 3.0 * R, 6.0 * R}, false, xs, zs, 4, -1.5, -0.5);
            reports.push_back(dec.report);
            reports.push_back(
                check_reciprocity(std::string("reciprocity-G") + tag,
                                  [&](Vec2 a, Vec2 b) { return bg->solve(a).total(b).v; }, pairs,
                                  1e-4));
        }
        {
            const TwoLayerMedium med{WaveNumber(k1), WaveNumber(k2), R};
            const auto bg = std::make_shared<PenetrableBackground>(med, R, npw);
            FieldSolver solver = [bg](Vec2 src) -> std::function<FieldValue(Vec2)> {
                auto sol = std::make_shared<TransmissionSolver::Solution>(bg->solve(src));
                return [sol](Vec2 x) { return sol->total(x); };
            };
            reports.push_back(check_helmholtz_kirchhoff("helmholtz-kirchhoff-P", solver, 1.5 * R,
                                                        true, pairs, 1024, 1e-3, R));
            std::vector<Vec2> xs, zs;
            for (int i = 0; i < 5; ++i) {
                xs.push_back({-4.0 + 2.0 * i, 0.9});
                zs.push_back({4.0 - 2.0 * i, -0.6});
            }
            const auto dec = check_remainder_decay(
                "remainder-decay-P", solver, [&](Vec2 x) { return med.k_at(x); },
                {1.5 * R, 3.0 * R, 6.0 * R}, true, xs, zs, 4, -5.0, 0.0);
            auto rep = dec.report;
            rep.pass = dec.monotone;
            reports.push_back(rep);
            reports.push_back(check_reciprocity(
                "reciprocity-GP", [&](Vec2 a, Vec2 b) { return bg->solve(a).total(b).v; }, pairs,
                1e-3));
        }
        {
            const WaveNumber k(k1);
            const auto curve = discretize_surface(
                SurfaceProfile::f1(), k, cfg.get_num("solver.nodes_per_wavelength"),
                cfg.get_num("solver.wing_wavelengths") * k.wavelength(), gl);
            std::vector<Vec2> dirs, srcs;
            for (int i = 0; i < 6; ++i) {
                const double th = pi * (i + 0.5) / 6.0;
                dirs.push_back({std::cos(th), std::sin(th)});
            }
            for (int i = 0; i < 4; ++i) srcs.push_back({-6.0 + 4.0 * i, 8.0 + 0.5 * i});
            for (auto kind : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
                auto op = std::make_shared<BoundaryIntegralOperator>(curve, kind, k);
                auto v_far = [op](Vec2 dir, Vec2 src) {
                    return solve_impenetrable_pointsource(op, src).correction_far(dir);
                };
                auto g_ws = [op, k](Vec2 dir, Vec2 src) {
                    return farfield_gamma(k.value) *
                           solve_impenetrable_planewave(op, {-dir.x1, -dir.x2}).correction(src).v;
                };
                reports.push_back(check_mixed_reciprocity(
                    std::string("mixed-reciprocity-") +
                        (kind == BoundaryKind::Dirichlet ? 'D' : 'N'),
                    v_far, g_ws, dirs, srcs, 1e-2));
            }
            const TwoLayerMedium med{WaveNumber(k1), WaveNumber(k2)};
            const TransmissionSolver ts(SurfaceProfile::f1(), med,
                                        cfg.get_num("solver.nodes_per_wavelength"));
            std::vector<Vec2> dirs_full = dirs;
            for (int i = 0; i < 6; ++i) {
                const double th = pi + pi * (i + 0.5) / 6.0;
                dirs_full.push_back({std::cos(th), std::sin(th)});
            }
            auto v_far = [&](Vec2 dir, Vec2 src) {
                return ts.solve_pointsource(src).correction_far(dir);
            };
            auto g_ws = [&](Vec2 dir, Vec2 src) {
                const double kk = dir.x2 > 0 ? k1 : k2;
                return farfield_gamma(kk) *
                       ts.solve_planewave({-dir.x1, -dir.x2}).correction(src).v;
            };
            reports.push_back(
                check_mixed_reciprocity("mixed-reciprocity-P", v_far, g_ws, dirs_full, srcs, 3e-2));
        }
    }

    std::cout << format_report_table(reports);
    std::cout << format_report_machine(reports);
    for (const auto& r : reports)
        if (!r.pass) return 1;
    return 0;
}

int cmd_render(const std::string& grid_path, const std::string& image_path, bool png,
               const std::string& config_path) {
    const ImageGrid g = read_image_grid(grid_path);
    std::unique_ptr<SurfaceProfile> overlay;
    if (!config_path.empty()) {
        RunConfig cfg;
        cfg.load_file(config_path);
        overlay = std::make_unique<SurfaceProfile>(cfg.make_profile());
    }
    if (png)
        write_png(g, image_path, overlay.get());
    else
        write_pgm(g, image_path, overlay.get());
    std::printf("wrote %s\n", image_path.c_str());
    return 0;
}

int cmd_greens(const CommonOpts& o, const std::string& field, double at1, double at2, double src1,
               double src2) {
    const RunConfig cfg = resolve_config(o);
    const double k1 = cfg.get_num("medium.kappa1");
    const double k2 = cfg.get_num("medium.kappa2");
    const double R = cfg.get_num("surface.R");
    const Vec2 x{at1, at2}, y{src1, src2};
    FieldValue v;
    if (field == "phi") {
        v = phi_field(WaveNumber(k1), x, y);
    } else if (field == "halfplane-D" || field == "halfplane-N") {
        v = halfplane_green(field.back() == 'D' ? BoundaryKind::Dirichlet : BoundaryKind::Neumann,
                            WaveNumber(k1), x, y);
    } else if (field == "planewave-D" || field == "planewave-N") {
        v = planewave_impenetrable(
            field.back() == 'D' ? BoundaryKind::Dirichlet : BoundaryKind::Neumann, WaveNumber(k1),
            x, y);
    } else if (field == "w0") {
        v = planewave_penetrable(TwoLayerMedium{WaveNumber(k1), WaveNumber(k2)}, x, y);
    } else if (field == "v0") {
        const TwoLayerFlatGreen bg0{WaveNumber(k1), WaveNumber(k2)};
        v = bg0.value(x, y);
    } else if (field == "GD" || field == "GN") {
        const GammaRBackground bg(field == "GD" ? BoundaryKind::Dirichlet : BoundaryKind::Neumann,
                                  WaveNumber(k1), R,
                                  cfg.get_num("solver.background_nodes_per_wavelength"),
                                  cfg.get_int("solver.grading_levels"));
        v = bg.solve(y).total(x);
    } else if (field == "GP") {
        const TwoLayerMedium med{WaveNumber(k1), WaveNumber(k2), R};
        const PenetrableBackground bg(med, R,
                                      cfg.get_num("solver.background_nodes_per_wavelength"));
        v = bg.solve(y).total(x);
    } else {
        std::cerr << "unknown field: " << field
                  << " (use phi|halfplane-D|halfplane-N|planewave-D|planewave-N|w0|v0|GD|GN|GP)\n";
        return 2;
    }
    std::printf("%s at (%.6g, %.6g), source/direction (%.6g, %.6g):\n", field.c_str(), at1, at2,
                src1, src2);
    std::printf("  value    = %.12e %+.12ei\n", v.v.real(), v.v.imag());
    std::printf("  gradient = (%.12e %+.12ei, %.12e %+.12ei)\n", v.grad.x1.real(),
                v.grad.x1.imag(), v.grad.x2.real(), v.grad.x2.imag());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "forward scattering and reverse-time-migration imaging for locally rough surfaces"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string out, data, regime, render_path, grid_path, image_path, level = "quick", field;
    bool png = false;
    double at1 = 0, at2 = 1, src1 = 0, src2 = 2;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "configuration file");
        sub->add_option("--preset", common.preset, "desk-scale or paper-scale");
        sub->add_option("--threads", common.threads, "worker cap (same results for any value)");
        sub->add_option("--seed", common.seed, "noise seed override");
    };

    auto* cf = app.add_subcommand("forward", "synthesize scattering data");
    add_common(cf);
    cf->add_option("--out", out, "output RTMD file")->required();

    auto* ci = app.add_subcommand("image", "compute the indicator image from data");
    add_common(ci);
    ci->add_option("--data", data, "input RTMD file")->required();
    ci->add_option("--out", out, "output RTMG file")->required();
    ci->add_option("--regime", regime, "near or far (overrides config)");
    ci->add_option("--render", render_path, "also write a normalized PGM heatmap");

    auto* cs = app.add_subcommand("selftest", "run built-in checks");
    add_common(cs);
    cs->add_option("--level", level, "quick or full");

    auto* cr = app.add_subcommand("render", "render an RTMG grid to PGM/PNG");
    cr->add_option("--grid", grid_path, "input RTMG file")->required();
    cr->add_option("--out", image_path, "output image file")->required();
    cr->add_flag("--png", png, "write PNG instead of PGM");
    cr->add_option("--config", common.config, "config supplying the profile overlay");

    auto* cg = app.add_subcommand("greens", "evaluate a background field at a point");
    add_common(cg);
    cg->add_option("--field", field,
                   "phi|halfplane-D|halfplane-N|planewave-D|planewave-N|w0|v0|GD|GN|GP")
        ->required();
    cg->add_option("--at-x", at1, "evaluation point x1");
    cg->add_option("--at-y", at2, "evaluation point x2");
    cg->add_option("--src-x", src1, "source x1 / direction component");
    cg->add_option("--src-y", src2, "source x2 / direction component");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cf->parsed()) return cmd_forward(common, out);
        if (ci->parsed()) return cmd_image(common, data, out, regime, render_path);
        if (cs->parsed()) return run_selftest(common, level);
        if (cr->parsed()) return cmd_render(grid_path, image_path, png, common.config);
        if (cg->parsed()) return cmd_greens(common, field, at1, at2, src1, src2);
    } catch (const rtm::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 4;
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        if (msg.find("cannot") == 0 || msg.find("write failed") != std::string::npos ||
            msg.find("truncated") != std::string::npos ||
            msg.find("bad magic") != std::string::npos) {
            std::cerr << "I/O error: " << msg << "\n";
            return 4;
        }
        std::cerr << "solver error: " << msg << "\n";
        return 3;
    }
    return 0;
}
