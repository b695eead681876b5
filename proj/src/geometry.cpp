#include "rtm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rtm {

// --------------------------------------------------------------------------
// Profiles
// --------------------------------------------------------------------------

SurfaceProfile SurfaceProfile::flat(double halfwidth) {
    SurfaceProfile p;
    p.kind = ProfileKind::Flat;
    p.support_halfwidth = halfwidth;
    return p;
}

SurfaceProfile SurfaceProfile::f1() {
    SurfaceProfile p;
    p.kind = ProfileKind::F1;
    p.support_halfwidth = 4.0;
    return p;
}

SurfaceProfile SurfaceProfile::f2() {
    SurfaceProfile p;
    p.kind = ProfileKind::F2;
    p.support_halfwidth = 4.0;
    return p;
}

SurfaceProfile SurfaceProfile::f3() {
    SurfaceProfile p;
    p.kind = ProfileKind::F3;
    p.support_halfwidth = 4.0;
    return p;
}

SurfaceProfile SurfaceProfile::gammaR_dip(double R) {
    if (!(R > 0.0)) throw std::invalid_argument("gammaR_dip: R must be > 0");
    SurfaceProfile p;
    p.kind = ProfileKind::GammaRDip;
    p.support_halfwidth = R;
    p.dip_radius = R;
    return p;
}

SurfaceProfile SurfaceProfile::tabulated(std::vector<double> x, std::vector<double> f) {
    if (x.size() != f.size() || x.size() < 2)
        throw std::invalid_argument("tabulated profile: need >= 2 samples");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("tabulated profile: abscissae must be increasing");
    SurfaceProfile p;
    p.kind = ProfileKind::Tabulated;
    p.table_x = std::move(x);
    p.table_f = std::move(f);
    p.support_halfwidth = std::max(std::abs(p.table_x.front()), std::abs(p.table_x.back()));
    return p;
}

SurfaceProfile SurfaceProfile::tabulated(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("tabulated profile: cannot open " + path);
    std::vector<double> x, f;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        double a, b;
        if (ss >> a >> b) {
            x.push_back(a);
            f.push_back(b);
        }
    }
    return tabulated(std::move(x), std::move(f));
}

namespace {

double bump_f1(double x) {
    // paper Example 1 minus the 0.5 base level
    if (std::abs(x) >= 4.0) return 0.0;
    return 0.6 * std::sin(0.6 * pi * x) * std::exp(16.0 / (x * x - 16.0));
}

double bump_f1_deriv(double x) {
    if (std::abs(x) >= 4.0) return 0.0;
    const double g = 16.0 / (x * x - 16.0);
    const double gp = -32.0 * x / ((x * x - 16.0) * (x * x - 16.0));
    return 0.6 * std::exp(g) * (0.6 * pi * std::cos(0.6 * pi * x) + std::sin(0.6 * pi * x) * gp);
}

double bump_f2(double x) {
    // paper Example 2 (multiscale) minus the base level
    if (std::abs(x) >= 4.0) return 0.0;
    return (0.5 + 0.05 * std::sin(3.0 * pi * x)) * std::exp(4.0 / (x * x - 16.0));
}

double bump_f2_deriv(double x) {
    if (std::abs(x) >= 4.0) return 0.0;
    const double g = 4.0 / (x * x - 16.0);
    const double gp = -8.0 * x / ((x * x - 16.0) * (x * x - 16.0));
    return std::exp(g) * (0.15 * pi * std::cos(3.0 * pi * x) + (0.5 + 0.05 * std::sin(3.0 * pi * x)) * gp);
}

double step_f3(double x) {
    // paper Example 3 levels {0.2, 0.3, 0.5} minus 0.5
    const double a = std::abs(x);
    if (a <= 1.0) return -0.3;
    if (a >= 3.0 && a <= 4.0) return -0.2;
    return 0.0;
}

double table_eval(const SurfaceProfile& p, double x) {
    if (x < p.table_x.front() || x > p.table_x.back())
        throw std::out_of_range("tabulated profile queried outside its table");
    const auto it = std::upper_bound(p.table_x.begin(), p.table_x.end(), x);
    const std::size_t i = std::min(p.table_x.size() - 1,
                                   static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - p.table_x.begin())));
    const double t = (x - p.table_x[i - 1]) / (p.table_x[i] - p.table_x[i - 1]);
    return (1.0 - t) * p.table_f[i - 1] + t * p.table_f[i];
}

double table_deriv(const SurfaceProfile& p, double x) {
    if (x < p.table_x.front() || x > p.table_x.back())
        throw std::out_of_range("tabulated profile queried outside its table");
    const auto it = std::upper_bound(p.table_x.begin(), p.table_x.end(), x);
    const std::size_t i = std::min(p.table_x.size() - 1,
                                   static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - p.table_x.begin())));
    return (p.table_f[i] - p.table_f[i - 1]) / (p.table_x[i] - p.table_x[i - 1]);
}

}  // namespace

double profile_eval(const SurfaceProfile& p, double x1) {
    switch (p.kind) {
        case ProfileKind::Flat: return 0.0;
        case ProfileKind::F1: return bump_f1(x1);
        case ProfileKind::F2: return bump_f2(x1);
        case ProfileKind::F3: return step_f3(x1);
        case ProfileKind::GammaRDip: {
            const double R = p.dip_radius;
            return std::abs(x1) >= R ? 0.0 : -std::sqrt(R * R - x1 * x1);
        }
        case ProfileKind::Tabulated: return table_eval(p, x1);
    }
    throw std::logic_error("profile_eval: bad kind");
}

double profile_deriv(const SurfaceProfile& p, double x1) {
    switch (p.kind) {
        case ProfileKind::Flat: return 0.0;
        case ProfileKind::F1: return bump_f1_deriv(x1);
        case ProfileKind::F2: return bump_f2_deriv(x1);
        case ProfileKind::F3: return 0.0;
        case ProfileKind::GammaRDip: {
            const double R = p.dip_radius;
            if (std::abs(x1) >= R) return 0.0;
            return x1 / std::sqrt(R * R - x1 * x1);
        }
        case ProfileKind::Tabulated: return table_deriv(p, x1);
    }
    throw std::logic_error("profile_deriv: bad kind");
}

std::vector<double> profile_jumps(const SurfaceProfile& p) {
    if (p.kind == ProfileKind::F3) return {-4.0, -3.0, -1.0, 1.0, 3.0, 4.0};
    return {};
}

SpecialSurfaceGammaR::SpecialSurfaceGammaR(double radius) : R(radius) {
    if (!(R > 0.0)) throw std::invalid_argument("SpecialSurfaceGammaR: R must be > 0");
}

double SpecialSurfaceGammaR::height(double x1) const {
    return std::abs(x1) >= R ? 0.0 : -std::sqrt(R * R - x1 * x1);
}

bool SpecialSurfaceGammaR::above(Vec2 x, double tol) const {
    return x.x2 > height(x.x1) + tol;
}

// --------------------------------------------------------------------------
// Curve discretization
// --------------------------------------------------------------------------

CurvePiece CurvePiece::line(Vec2 a, Vec2 b, bool gs, bool ge) {
    CurvePiece p;
    p.type = Type::Line;
    p.a = a;
    p.b = b;
    p.grade_start = gs;
    p.grade_end = ge;
    return p;
}

CurvePiece CurvePiece::arc(Vec2 center, double radius, double ang0, double ang1, bool gs, bool ge) {
    CurvePiece p;
    p.type = Type::Arc;
    p.center = center;
    p.radius = radius;
    p.ang0 = ang0;
    p.ang1 = ang1;
    p.grade_start = gs;
    p.grade_end = ge;
    return p;
}

CurvePiece CurvePiece::graph(const SurfaceProfile& prof, double xa, double xb, bool gs, bool ge) {
    CurvePiece p;
    p.type = Type::Graph;
    p.prof = &prof;
    p.xa = xa;
    p.xb = xb;
    p.grade_start = gs;
    p.grade_end = ge;
    return p;
}

Vec2 CurvePiece::pos(double t) const {
    switch (type) {
        case Type::Line: return {a.x1 + t * (b.x1 - a.x1), a.x2 + t * (b.x2 - a.x2)};
        case Type::Arc: {
            const double ang = ang0 + t * (ang1 - ang0);
            return {center.x1 + radius * std::cos(ang), center.x2 + radius * std::sin(ang)};
        }
        case Type::Graph: {
            const double x = xa + t * (xb - xa);
            return {x, profile_eval(*prof, x)};
        }
    }
    return {};
}

Vec2 CurvePiece::vel(double t) const {
    switch (type) {
        case Type::Line: return {b.x1 - a.x1, b.x2 - a.x2};
        case Type::Arc: {
            const double ang = ang0 + t * (ang1 - ang0);
            const double d = ang1 - ang0;
            return {-radius * std::sin(ang) * d, radius * std::cos(ang) * d};
        }
        case Type::Graph: {
            const double x = xa + t * (xb - xa);
            return {xb - xa, profile_deriv(*prof, x) * (xb - xa)};
        }
    }
    return {};
}

double CurvePiece::curvature(double t) const {
    switch (type) {
        case Type::Line: return 0.0;
        case Type::Arc: return (ang1 > ang0 ? 1.0 : -1.0) / radius;
        case Type::Graph: {
            const double x = xa + t * (xb - xa);
            const double h = 1e-5;
            const double lo = std::max(x - h, std::min(xa, xb));
            const double hi = std::min(x + h, std::max(xa, xb));
            const double fp = profile_deriv(*prof, x);
            const double fpp = (profile_deriv(*prof, hi) - profile_deriv(*prof, lo)) / (hi - lo);
            const double s2 = 1.0 + fp * fp;
            // signed curvature follows the traversal direction
            return (xb >= xa ? 1.0 : -1.0) * fpp / (s2 * std::sqrt(s2));
        }
    }
    return 0.0;
}

double CurvePiece::arclength(double t0, double t1) const {
    if (type == Type::Line) return dist(pos(t0), pos(t1));
    if (type == Type::Arc) return radius * std::abs(ang1 - ang0) * (t1 - t0);
    static const double gx[5] = {-0.906179845938664, -0.538469310105683, 0.0,
                                 0.538469310105683, 0.906179845938664};
    static const double gw[5] = {0.236926885056189, 0.478628670499366, 0.568888888888889,
                                 0.478628670499366, 0.236926885056189};
    double s = 0.0;
    const int np = 8;
    for (int p = 0; p < np; ++p) {
        const double u0 = t0 + (t1 - t0) * p / np;
        const double u1 = t0 + (t1 - t0) * (p + 1) / np;
        double acc = 0.0;
        for (int q = 0; q < 5; ++q)
            acc += gw[q] * speed(0.5 * (u0 + u1) + 0.5 * (u1 - u0) * gx[q]);
        s += acc * 0.5 * (u1 - u0);
    }
    return s;
}

namespace {

// t-breakpoints of one piece: n_base intervals, dyadic grading at flagged ends
std::vector<double> interval_breaks(int n_base, bool gs, bool ge, int levels) {
    std::vector<double> t;
    t.push_back(0.0);
    const double h = 1.0 / n_base;
    if (gs && n_base >= 1) {
        // split first interval: h/2^L, h/2^L, h/2^{L-1}, ..., h/2
        double acc = 0.0;
        acc += h / std::pow(2.0, levels);
        t.push_back(acc);
        for (int l = levels; l >= 1; --l) {
            acc += h / std::pow(2.0, l);
            t.push_back(acc);
        }
    } else {
        t.push_back(h);
    }
    for (int i = 2; i <= n_base - 1; ++i) t.push_back(i * h);
    if (ge && n_base >= 2) {
        double acc = (n_base - 1) * h;
        for (int l = 1; l <= levels; ++l) {
            acc += h / std::pow(2.0, l);
            t.push_back(acc);
        }
        acc += h / std::pow(2.0, levels);
        t.push_back(1.0);
    } else if (n_base >= 2) {
        t.push_back(1.0);
    }
    // n_base == 1 with grading at end only: rebuild symmetric
    if (n_base == 1 && ge) {
        t.clear();
        t.push_back(0.0);
        if (gs) {
            double acc = 0.5 / std::pow(2.0, levels);
            t.push_back(acc);
            for (int l = levels; l >= 1; --l) {
                acc += 0.5 / std::pow(2.0, l);
                t.push_back(acc);
            }
        } else {
            t.push_back(0.5);
        }
        for (int l = 1; l <= levels; ++l)
            t.push_back(t.back() + 0.5 / std::pow(2.0, l));
        t.push_back(1.0);
    }
    t.back() = 1.0;
    return t;
}

}  // namespace

DiscretizedCurve discretize_pieces(const std::vector<CurvePiece>& pieces, double h_target,
                                   int grading_levels) {
    DiscretizedCurve curve;
    int piece_id = 0;
    for (const auto& pc : pieces) {
        const double len = pc.arclength(0.0, 1.0);
        if (len <= 0.0) {
            ++piece_id;
            continue;
        }
        const int n_base = std::max(1, static_cast<int>(std::ceil(len / h_target)));
        const auto breaks = interval_breaks(n_base, pc.grade_start, pc.grade_end, grading_levels);
        // three Gauss-Legendre nodes per break interval
        static const double g3x[3] = {-0.774596669241483, 0.0, 0.774596669241483};
        static const double g3w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
        for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
            const double t0 = breaks[j], t1 = breaks[j + 1];
            const double tm = 0.5 * (t0 + t1), th = 0.5 * (t1 - t0);
            CurvePanel pan;
            pan.first_node = static_cast<int>(curve.nodes.size());
            pan.center = pc.pos(tm);
            {
                const Vec2 v = pc.vel(tm);
                const double sp = norm(v);
                pan.tangent = {v.x1 / sp, v.x2 / sp};
            }
            pan.len = pc.arclength(t0, t1);
            pan.piece = piece_id;
            const int pid = static_cast<int>(curve.panels.size());
            for (int q = 0; q < 3; ++q) {
                const double tq = tm + th * g3x[q];
                CurveNode nd;
                nd.pos = pc.pos(tq);
                const Vec2 v = pc.vel(tq);
                const double sp = norm(v);
                nd.tangent = {v.x1 / sp, v.x2 / sp};
                nd.normal = {-nd.tangent.x2, nd.tangent.x1};
                nd.weight = g3w[q] * th * sp;
                nd.curvature = pc.curvature(tq);
                nd.piece = piece_id;
                nd.panel = pid;
                curve.nodes.push_back(nd);
                curve.total_arclength += nd.weight;
            }
            curve.panels.push_back(pan);
        }
        ++piece_id;
    }
    return curve;
}

DiscretizedCurve discretize_surface(const SurfaceProfile& p, WaveNumber k,
                                    double nodes_per_wavelength, double W,
                                    int grading_levels, double wing_extension) {
    if (!(nodes_per_wavelength >= 6.0))
        throw std::invalid_argument("discretize_surface: nodes_per_wavelength must be >= 6");
    if (!(W >= 0.0)) throw std::invalid_argument("discretize_surface: W must be >= 0");

    const double A = p.support_halfwidth;
    if (A + W <= 0.0) throw std::invalid_argument("discretize_surface: empty curve");

    std::vector<CurvePiece> pieces;
    switch (p.kind) {
        case ProfileKind::Flat:
            pieces.push_back(CurvePiece::line({-A - W, 0.0}, {A + W, 0.0}));
            break;
        case ProfileKind::F1:
        case ProfileKind::F2:
        case ProfileKind::Tabulated: {
            if (W > 0.0) pieces.push_back(CurvePiece::line({-A - W, 0.0}, {-A, 0.0}));
            pieces.push_back(CurvePiece::graph(p, -A, A));
            if (W > 0.0) pieces.push_back(CurvePiece::line({A, 0.0}, {A + W, 0.0}));
            break;
        }
        case ProfileKind::F3: {
            // polyline with vertical jump segments; every junction is a corner
            const std::vector<double> xs = {-4.0, -3.0, -1.0, 1.0, 3.0, 4.0};
            if (W > 0.0) pieces.push_back(CurvePiece::line({-A - W, 0.0}, {-4.0, 0.0}, false, true));
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const double x = xs[j];
                const double yl = (j == 0) ? 0.0 : profile_eval(p, 0.5 * (xs[j - 1] + x));
                const double yr = (j + 1 == xs.size()) ? 0.0 : profile_eval(p, 0.5 * (x + xs[j + 1]));
                if (yl != yr) pieces.push_back(CurvePiece::line({x, yl}, {x, yr}, true, true));
                if (j + 1 < xs.size())
                    pieces.push_back(CurvePiece::line({x, yr}, {xs[j + 1], yr}, true, true));
            }
            if (W > 0.0) pieces.push_back(CurvePiece::line({4.0, 0.0}, {A + W, 0.0}, true, false));
            break;
        }
        case ProfileKind::GammaRDip: {
            const double R = p.dip_radius;
            if (W > 0.0) pieces.push_back(CurvePiece::line({-R - W, 0.0}, {-R, 0.0}, false, true));
            pieces.push_back(CurvePiece::arc({0.0, 0.0}, R, pi, 2.0 * pi, true, true));
            if (W > 0.0) pieces.push_back(CurvePiece::line({R, 0.0}, {R + W, 0.0}, true, false));
            break;
        }
    }

    // optional outward wing extension: panels coarsen geometrically away
    // from the perturbation (capped below half a wavelength) so the
    // truncation boundary moves out at logarithmic cost
    if (wing_extension > 0.0 && W > 0.0) {
        const double h0 = k.wavelength() / nodes_per_wavelength;
        const double cap = k.wavelength() / 2.5;
        const double x_in = A + W;
        for (double sgn : {1.0, -1.0}) {
            double pos = x_in, len = h0;
            while (pos < x_in + wing_extension) {
                const double L = std::min(len, cap);
                pieces.push_back(CurvePiece::line({sgn * pos, 0.0}, {sgn * (pos + L), 0.0}));
                pos += L;
                len *= 1.35;
            }
        }
    }

    DiscretizedCurve curve = discretize_pieces(pieces, k.wavelength() / nodes_per_wavelength,
                                               grading_levels);
    curve.wing_halfwidth = W;
    curve.nodes_per_wavelength = nodes_per_wavelength;
    return curve;
}

// --------------------------------------------------------------------------
// Acquisition
// --------------------------------------------------------------------------

AcquisitionPoints acquisition_points(const AcquisitionGeometry& g, double gamma_R_radius) {
    if (g.N_s < 2 || g.N_r < 2)
        throw std::invalid_argument("acquisition_points: N_s and N_r must be >= 2");
    if (g.regime == Regime::Near) {
        if (!(g.R_s > 0.0) || !(g.R_r > 0.0) || g.R_s > g.R_r)
            throw std::invalid_argument("acquisition_points: need 0 < R_s <= R_r");
        if (gamma_R_radius > 0.0 && g.R_s <= gamma_R_radius)
            throw std::invalid_argument("acquisition_points: sources inside background surface");
    }

    auto angles_for = [&](int n) {
        std::vector<double> ang(n);
        if (g.aperture == Aperture::UpperSemicircle) {
            for (int j = 0; j < n; ++j) ang[j] = pi * (j + 0.5) / n;
        } else {
            for (int j = 0; j < n; ++j) ang[j] = 2.0 * pi * j / n;
            if (gamma_R_radius > 0.0) {
                // a point at height 0 on the circle lies on the flat part of
                // Gamma_R; rotate such angles by a tiny inset
                for (auto& a : ang)
                    if (std::abs(std::sin(a)) < 1e-9) a += 1e-3;
            }
        }
        return ang;
    };

    AcquisitionPoints out;
    out.source_angles = angles_for(g.N_s);
    out.receiver_angles = angles_for(g.N_r);
    const double rs = g.regime == Regime::Near ? g.R_s : 1.0;
    const double rr = g.regime == Regime::Near ? g.R_r : 1.0;
    for (double a : out.source_angles) out.sources.push_back({rs * std::cos(a), rs * std::sin(a)});
    for (double a : out.receiver_angles) out.receivers.push_back({rr * std::cos(a), rr * std::sin(a)});
    return out;
}

// --------------------------------------------------------------------------
// Image grid
// --------------------------------------------------------------------------

ImageGrid::ImageGrid(double a1, double b1, double a2, double b2, int m1, int m2)
    : x1min(a1), x1max(b1), x2min(a2), x2max(b2), n1(m1), n2(m2) {
    if (m1 < 1 || m2 < 1) throw std::invalid_argument("ImageGrid: resolution must be >= 1");
    values.assign(static_cast<std::size_t>(m1) * m2, 0.0);
}

ImageGrid normalize_image(const ImageGrid& g) {
    if (g.values.empty()) throw std::invalid_argument("normalize_image: empty grid");
    const auto [mn, mx] = std::minmax_element(g.values.begin(), g.values.end());
    if (*mx == *mn) throw std::invalid_argument("normalize_image: constant grid");
    ImageGrid out = g;
    out.raw_min = *mn;
    out.raw_max = *mx;
    out.normalized = true;
    for (auto& v : out.values) v = -1.0 + 2.0 * (v - *mn) / (*mx - *mn);
    return out;
}

}  // namespace rtm
