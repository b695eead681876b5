#include "rtm/imaging.hpp"

#include <cmath>
#include <stdexcept>

namespace rtm {

BackgroundTable tabulate_background(const ImageGrid& grid, const std::vector<Vec2>& sources,
                                    const std::function<std::function<Complex(Vec2)>(Vec2)>& fn) {
    BackgroundTable out;
    out.n_src = static_cast<int>(sources.size());
    const std::size_t nz = grid.values.size();
    out.vals.assign(nz * sources.size(), Complex(0.0));
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < out.n_src; ++s) {
        const auto eval = fn(sources[s]);
        for (int i1 = 0; i1 < grid.n1; ++i1)
            for (int i2 = 0; i2 < grid.n2; ++i2) {
                const std::size_t iz = static_cast<std::size_t>(i1) * grid.n2 + i2;
                out.vals[iz * out.n_src + s] = eval(grid.point(i1, i2));
            }
    }
    return out;
}

ImageGrid indicator_contract(const ScatterData& data, const ImageGrid& grid,
                             const BackgroundTable& Bs, const BackgroundTable& Br,
                             const std::vector<Complex>& source_weight,
                             const std::vector<Complex>& receiver_weight, double prefactor,
                             Complex outer_weight) {
    if (Bs.n_src != data.N_s || Br.n_src != data.N_r)
        throw std::invalid_argument("indicator_contract: table/data size mismatch");
    ImageGrid out = grid;
    const std::size_t nz = grid.values.size();
    std::vector<Complex> vw(static_cast<std::size_t>(data.N_r) * data.N_s);
    for (int r = 0; r < data.N_r; ++r)
        for (int s = 0; s < data.N_s; ++s)
            vw[static_cast<std::size_t>(r) * data.N_s + s] =
                receiver_weight[r] * std::conj(data.at(r, s));
#pragma omp parallel for schedule(static)
    for (long iz = 0; iz < static_cast<long>(nz); ++iz) {
        Complex acc = 0.0;
        for (int s = 0; s < data.N_s; ++s) {
            Complex q = 0.0;
            for (int r = 0; r < data.N_r; ++r)
                q += Br.at(iz, r) * vw[static_cast<std::size_t>(r) * data.N_s + s];
            acc += Bs.at(iz, s) * source_weight[s] * q;
        }
        out.values[iz] = prefactor * std::imag(outer_weight * acc);
    }
    return out;
}

namespace {

void check_grid(const ScatterData& data, const ImageGrid& g) {
    if (g.n1 < 1 || g.n2 < 1) throw std::invalid_argument("indicator: empty grid");
    const double rmax = std::max(
        {std::hypot(g.x1min, g.x2min), std::hypot(g.x1max, g.x2min), std::hypot(g.x1min, g.x2max),
         std::hypot(g.x1max, g.x2max)});
    if (data.regime == Regime::Near && rmax >= data.R_s)
        throw std::invalid_argument("indicator: grid must lie inside the source circle");
    SpecialSurfaceGammaR gam(data.R);
    for (int i1 = 0; i1 < g.n1; ++i1)
        if (!(g.x2min > gam.height(g.x1(i1))))
            throw std::invalid_argument("indicator: grid extends below the reference surface");
}

}  // namespace

ImageGrid indicator_near_impenetrable(const ScatterData& data, const IndicatorConfig& cfg) {
    if (data.regime != Regime::Near || data.kind == SurfaceKind::Penetrable)
        throw std::invalid_argument("indicator_near_impenetrable: wrong data kind/regime");
    check_grid(data, cfg.grid);
    const BoundaryKind bk =
        data.kind == SurfaceKind::Dirichlet ? BoundaryKind::Dirichlet : BoundaryKind::Neumann;
    const GammaRBackground bg(bk, WaveNumber(data.k1), data.R, cfg.nodes_per_wavelength,
                              cfg.grading_levels);
    AcquisitionGeometry g;
    g.regime = Regime::Near;
    g.aperture = Aperture::UpperSemicircle;
    g.R_s = data.R_s;
    g.R_r = data.R_r;
    g.N_s = data.N_s;
    g.N_r = data.N_r;
    const auto acq = acquisition_points(g, data.R);

    auto fn = [&](Vec2 src) -> std::function<Complex(Vec2)> {
        auto sol = std::make_shared<GammaRBackground::Solution>(bg.solve(src));
        return [sol](Vec2 z) { return sol->total_value(z); };
    };
    const auto Bs = tabulate_background(cfg.grid, acq.sources, fn);
    const bool shared = data.N_s == data.N_r && data.R_s == data.R_r;
    const auto Br = shared ? Bs : tabulate_background(cfg.grid, acq.receivers, fn);

    const double ws = pi * data.R_s / data.N_s;
    const double wr = pi * data.R_r / data.N_r;
    const std::vector<Complex> ones_s(data.N_s, Complex(1.0)), ones_r(data.N_r, Complex(1.0));
    return indicator_contract(data, cfg.grid, Bs, Br, ones_s, ones_r,
                              -data.k1 * data.k1 * ws * wr, Complex(1.0));
}

ImageGrid indicator_near_penetrable(const ScatterData& data, const IndicatorConfig& cfg) {
    if (data.regime != Regime::Near || data.kind != SurfaceKind::Penetrable)
        throw std::invalid_argument("indicator_near_penetrable: wrong data kind/regime");
    check_grid(data, cfg.grid);
    const TwoLayerMedium med{WaveNumber(data.k1), WaveNumber(data.k2), data.R};
    const PenetrableBackground bg(med, data.R, cfg.nodes_per_wavelength);
    AcquisitionGeometry g;
    g.regime = Regime::Near;
    g.aperture = Aperture::FullCircle;
    g.R_s = data.R_s;
    g.R_r = data.R_r;
    g.N_s = data.N_s;
    g.N_r = data.N_r;
    const auto acq = acquisition_points(g, data.R);

    auto fn = [&](Vec2 src) -> std::function<Complex(Vec2)> {
        auto sol = std::make_shared<TransmissionSolver::Solution>(bg.solve(src));
        return [sol](Vec2 z) { return sol->total_value(z); };
    };
    const auto Bs = tabulate_background(cfg.grid, acq.sources, fn);
    const bool shared = data.N_s == data.N_r && data.R_s == data.R_r;
    const auto Br = shared ? Bs : tabulate_background(cfg.grid, acq.receivers, fn);

    std::vector<Complex> ksrc(data.N_s), krec(data.N_r);
    for (int s = 0; s < data.N_s; ++s) ksrc[s] = bg.k_at(acq.sources[s]);
    for (int r = 0; r < data.N_r; ++r) krec[r] = bg.k_at(acq.receivers[r]);
    const double ws = 2.0 * pi * data.R_s / data.N_s;
    const double wr = 2.0 * pi * data.R_r / data.N_r;
    return indicator_contract(data, cfg.grid, Bs, Br, ksrc, krec, -ws * wr, Complex(1.0));
}

ImageGrid indicator_far(const ScatterData& data, const IndicatorConfig& cfg) {
    if (data.regime != Regime::Far) throw std::invalid_argument("indicator_far: near data");
    check_grid(data, cfg.grid);
    AcquisitionGeometry g;
    g.regime = Regime::Far;
    g.aperture = data.kind == SurfaceKind::Penetrable ? Aperture::FullCircle
                                                      : Aperture::UpperSemicircle;
    g.R_s = 1.0;
    g.R_r = 1.0;
    g.N_s = data.N_s;
    g.N_r = data.N_r;
    const auto acq = acquisition_points(g, data.R);

    if (data.kind != SurfaceKind::Penetrable) {
        const BoundaryKind bk =
            data.kind == SurfaceKind::Dirichlet ? BoundaryKind::Dirichlet : BoundaryKind::Neumann;
        const GammaRBackground bg(bk, WaveNumber(data.k1), data.R, cfg.nodes_per_wavelength,
                                  cfg.grading_levels);
        auto fn = [&](Vec2 dir) -> std::function<Complex(Vec2)> {
            auto sol = std::make_shared<GammaRBackground::Solution>(
                bg.solve_planewave({-dir.x1, -dir.x2}));
            return [sol](Vec2 z) { return sol->total_value(z); };
        };
        const auto Bs = tabulate_background(cfg.grid, acq.sources, fn);
        const auto Br =
            data.N_s == data.N_r ? Bs : tabulate_background(cfg.grid, acq.receivers, fn);
        const Complex g1 = farfield_gamma(data.k1);
        const double ws = pi / data.N_s, wr = pi / data.N_r;
        const std::vector<Complex> ones_s(data.N_s, Complex(1.0)), ones_r(data.N_r, Complex(1.0));
        return indicator_contract(data, cfg.grid, Bs, Br, ones_s, ones_r,
                                  -data.k1 * data.k1 * std::norm(g1) * ws * wr, g1);
    }

    const TwoLayerMedium med{WaveNumber(data.k1), WaveNumber(data.k2), data.R};
    const PenetrableBackground bg(med, data.R, cfg.nodes_per_wavelength);
    auto fn = [&](Vec2 dir) -> std::function<Complex(Vec2)> {
        auto sol = std::make_shared<TransmissionSolver::Solution>(
            bg.solver().solve_planewave({-dir.x1, -dir.x2}));
        return [sol](Vec2 z) { return sol->total_value(z); };
    };
    const auto Bs = tabulate_background(cfg.grid, acq.sources, fn);
    const auto Br = data.N_s == data.N_r ? Bs : tabulate_background(cfg.grid, acq.receivers, fn);
    std::vector<Complex> wsrc(data.N_s), wrec(data.N_r);
    for (int s = 0; s < data.N_s; ++s) {
        const double kk = acq.sources[s].x2 > 0.0 ? data.k1 : data.k2;
        wsrc[s] = kk * farfield_gamma(kk);
    }
    for (int r = 0; r < data.N_r; ++r) {
        const double kk = acq.receivers[r].x2 > 0.0 ? data.k1 : data.k2;
        wrec[r] = kk * std::norm(farfield_gamma(kk));
    }
    const double ws = 2.0 * pi / data.N_s, wr = 2.0 * pi / data.N_r;
    return indicator_contract(data, cfg.grid, Bs, Br, wsrc, wrec, -ws * wr, Complex(1.0));
}

ImageGrid compute_indicator(const ScatterData& data, const IndicatorConfig& cfg) {
    if (data.regime == Regime::Far) return indicator_far(data, cfg);
    if (data.kind == SurfaceKind::Penetrable) return indicator_near_penetrable(data, cfg);
    return indicator_near_impenetrable(data, cfg);
}

std::vector<double> column_extremum_height(const ImageGrid& g, bool nadir) {
    std::vector<double> out(g.n1);
    for (int i1 = 0; i1 < g.n1; ++i1) {
        int best = 0;
        for (int i2 = 1; i2 < g.n2; ++i2) {
            const bool better =
                nadir ? g.at(i1, i2) < g.at(i1, best) : g.at(i1, i2) > g.at(i1, best);
            if (better) best = i2;
        }
        out[i1] = g.x2(best);
    }
    return out;
}

double localization_score(const ImageGrid& g, const SurfaceProfile& truth, bool nadir,
                          double tol) {
    const auto ext = column_extremum_height(g, nadir);
    int hit = 0, total = 0;
    for (int i1 = 0; i1 < g.n1; ++i1) {
        const double f = profile_eval(truth, g.x1(i1));
        if (std::abs(f) < 1e-12) continue;
        ++total;
        if (std::abs(ext[i1] - f) <= tol) ++hit;
    }
    if (total == 0) return 1.0;
    return static_cast<double>(hit) / total;
}

}  // namespace rtm
