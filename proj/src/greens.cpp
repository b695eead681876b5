#include "rtm/greens.hpp"

#include <cmath>
#include <stdexcept>

#include "rtm/specfun.hpp"

namespace rtm {

Complex farfield_gamma(double k) {
    return std::exp(iu * (pi / 4.0)) / std::sqrt(8.0 * k * pi);
}

double TwoLayerMedium::k_at(Vec2 x) const {
    if (gammaR_radius > 0.0) {
        const double R = gammaR_radius;
        const double h = std::abs(x.x1) >= R ? 0.0 : -std::sqrt(R * R - x.x1 * x.x1);
        return x.x2 > h ? k1.value : k2.value;
    }
    return x.x2 >= 0.0 ? k1.value : k2.value;
}

FieldValue halfplane_green(BoundaryKind kind, WaveNumber k, Vec2 x, Vec2 y) {
    const Vec2 yi{y.x1, -y.x2};
    if (dist(x, y) <= 0.0) throw std::domain_error("halfplane_green: coincident with source");
    if (dist(x, yi) <= 0.0) throw std::domain_error("halfplane_green: coincident with image point");
    const FieldValue a = phi_field(k, x, y);
    const FieldValue b = phi_field(k, x, yi);
    const double s = (kind == BoundaryKind::Dirichlet) ? -1.0 : 1.0;
    return {a.v + s * b.v, {a.grad.x1 + s * b.grad.x1, a.grad.x2 + s * b.grad.x2}};
}

FieldValue planewave_impenetrable(BoundaryKind kind, WaveNumber k1, Vec2 x, Vec2 d) {
    if (!(d.x2 < 0.0)) throw std::invalid_argument("planewave_impenetrable: direction must point downward");
    const Vec2 dr{d.x1, -d.x2};
    const Complex e1 = std::exp(iu * k1.value * dot(x, d));
    const Complex e2 = std::exp(iu * k1.value * dot(x, dr));
    const double s = (kind == BoundaryKind::Dirichlet) ? -1.0 : 1.0;
    FieldValue out;
    out.v = e1 + s * e2;
    out.grad.x1 = iu * k1.value * (d.x1 * e1 + s * dr.x1 * e2);
    out.grad.x2 = iu * k1.value * (d.x2 * e1 + s * dr.x2 * e2);
    return out;
}

FresnelCoefficients fresnel(WaveNumber k1, WaveNumber k2, double theta) {
    if (!(theta > 0.0) || !(theta < 2.0 * pi) || theta == pi)
        throw std::invalid_argument("fresnel: theta must lie in (0,2pi) excluding pi");
    const double ct = std::cos(theta), st = std::sin(theta);
    if (std::abs(st) < 1e-12) throw std::invalid_argument("fresnel: grazing incidence");
    const bool downward = st < 0.0;
    const double k_inc = downward ? k1.value : k2.value;
    const double k_tr = downward ? k2.value : k1.value;

    const double xi = k_inc * ct;
    const double beta_inc = k_inc * std::abs(st);
    const Complex beta_tr = std::sqrt(Complex(k_tr * k_tr - xi * xi, 0.0));
    if (std::abs(beta_tr) < 1e-6 * k_tr)
        throw std::invalid_argument("fresnel: exact critical-angle incidence");

    FresnelCoefficients out;
    out.R = (beta_inc - beta_tr) / (beta_inc + beta_tr);
    out.T = out.R + 1.0;
    // transmitted wave exp(i k_tr x.dt): continues downward/upward and decays
    // past the critical angle
    out.dt.x1 = Complex(xi / k_tr, 0.0);
    out.dt.x2 = (downward ? -1.0 : 1.0) * beta_tr / k_tr;
    out.theta_c = (k_tr < k_inc) ? std::acos(k_tr / k_inc) : 0.0;
    return out;
}

FieldValue planewave_penetrable(const TwoLayerMedium& m, Vec2 x, Vec2 d) {
    if (std::abs(d.x2) < 1e-12)
        throw std::invalid_argument("planewave_penetrable: grazing direction");
    double theta = std::atan2(d.x2, d.x1);
    if (theta <= 0.0) theta += 2.0 * pi;
    const bool downward = d.x2 < 0.0;
    const double k_inc = downward ? m.k1.value : m.k2.value;
    const double k_tr = downward ? m.k2.value : m.k1.value;
    const auto fr = fresnel(m.k1, m.k2, theta);

    const bool eval_inc_side = downward ? (x.x2 >= 0.0) : (x.x2 <= 0.0);
    FieldValue out;
    if (eval_inc_side) {
        const Vec2 dr{d.x1, -d.x2};
        const Complex e1 = std::exp(iu * k_inc * dot(x, d));
        const Complex e2 = std::exp(iu * k_inc * dot(x, dr));
        out.v = e1 + fr.R * e2;
        out.grad.x1 = iu * k_inc * (d.x1 * e1 + fr.R * dr.x1 * e2);
        out.grad.x2 = iu * k_inc * (d.x2 * e1 + fr.R * dr.x2 * e2);
    } else {
        const Complex ph = iu * k_tr * (fr.dt.x1 * x.x1 + fr.dt.x2 * x.x2);
        const Complex e = fr.T * std::exp(ph);
        out.v = e;
        out.grad.x1 = iu * k_tr * fr.dt.x1 * e;
        out.grad.x2 = iu * k_tr * fr.dt.x2 * e;
    }
    return out;
}

KernelSecond phi_second(WaveNumber k, Vec2 x, Vec2 y) {
    const double r = dist(x, y);
    if (r <= 0.0) throw std::domain_error("phi_second: coincident points");
    const double kk = k.value;
    const Complex h0 = hankel1(0, kk * r), h1 = hankel1(1, kk * r);
    const double e[2] = {(x.x1 - y.x1) / r, (x.x2 - y.x2) / r};
    KernelSecond out;
    out.v = 0.25 * iu * h0;
    const Complex g = -0.25 * iu * kk * h1;
    out.gx = {g * e[0], g * e[1]};
    out.gy = {-g * e[0], -g * e[1]};
    const Complex c0 = 0.25 * iu * kk;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double dij = (i == j) ? 1.0 : 0.0;
            out.gxy[i][j] = c0 * (kk * h0 * e[i] * e[j] + h1 / r * (dij - 2.0 * e[i] * e[j]));
        }
    return out;
}

// --------------------------------------------------------------------------
// Two-layer flat Green's function
// --------------------------------------------------------------------------

TwoLayerFlatGreen::TwoLayerFlatGreen(WaveNumber k1, WaveNumber k2, double tol)
    : sp_(k1.value, k2.value, tol) {}

namespace {

struct PairGeom {
    double d, sgn;
    bool xu, yu;  // per-point upper-side flags (x2 >= 0 counts as upper)
};

PairGeom pair_geom(Vec2 x, Vec2 y) {
    PairGeom g;
    const double dx = x.x1 - y.x1;
    g.d = std::abs(dx);
    g.sgn = dx > 0.0 ? 1.0 : (dx < 0.0 ? -1.0 : 0.0);
    g.xu = x.x2 >= 0.0;
    g.yu = y.x2 >= 0.0;
    return g;
}

}  // namespace

KernelSecond TwoLayerFlatGreen::spectral_part(Vec2 x, Vec2 y, int order) const {
    const PairGeom g = pair_geom(x, y);
    KernelSecond out;
    if (g.xu && g.yu) {
        const auto F = sp_.reflected_upper(g.d, x.x2 + y.x2, order);
        out.v = F.f;
        out.gx = {g.sgn * F.fd, F.fh1};
        out.gy = {-g.sgn * F.fd, F.fh1};
        out.gxy[0][0] = -F.fdd;
        out.gxy[0][1] = g.sgn * F.fdh1;
        out.gxy[1][0] = -g.sgn * F.fdh1;
        out.gxy[1][1] = F.fh1h1;
    } else if (!g.xu && !g.yu) {
        const auto F = sp_.reflected_lower(g.d, -(x.x2 + y.x2), order);
        out.v = F.f;
        out.gx = {g.sgn * F.fd, -F.fh1};
        out.gy = {-g.sgn * F.fd, -F.fh1};
        out.gxy[0][0] = -F.fdd;
        out.gxy[0][1] = -g.sgn * F.fdh1;
        out.gxy[1][0] = g.sgn * F.fdh1;
        out.gxy[1][1] = F.fh1h1;
    } else if (g.xu && !g.yu) {
        const auto F = sp_.transmitted(g.d, x.x2, -y.x2, order);
        out.v = F.f;
        out.gx = {g.sgn * F.fd, F.fh1};
        out.gy = {-g.sgn * F.fd, -F.fh2};
        out.gxy[0][0] = -F.fdd;
        out.gxy[0][1] = -g.sgn * F.fdh2;
        out.gxy[1][0] = -g.sgn * F.fdh1;
        out.gxy[1][1] = -F.fh1h2;
    } else {
        const auto F = sp_.transmitted(g.d, y.x2, -x.x2, order);
        out.v = F.f;
        out.gx = {g.sgn * F.fd, -F.fh2};
        out.gy = {-g.sgn * F.fd, F.fh1};
        out.gxy[0][0] = -F.fdd;
        out.gxy[0][1] = g.sgn * F.fdh1;
        out.gxy[1][0] = g.sgn * F.fdh2;
        out.gxy[1][1] = -F.fh1h2;
    }
    return out;
}

FieldValue TwoLayerFlatGreen::value(Vec2 x, Vec2 y) const {
    if (dist(x, y) <= 0.0) throw std::domain_error("twolayer_flat_green: coincident points");
    const PairGeom g = pair_geom(x, y);
    const KernelSecond sp = spectral_part(x, y, 1);
    FieldValue out{sp.v, sp.gx};
    if (g.xu == g.yu) {
        const WaveNumber ks(g.xu ? sp_.k1() : sp_.k2());
        const FieldValue d = phi_field(ks, x, y);
        out.v += d.v;
        out.grad = out.grad + d.grad;
    }
    return out;
}

KernelSecond TwoLayerFlatGreen::full(Vec2 x, Vec2 y) const {
    if (dist(x, y) <= 0.0) throw std::domain_error("twolayer_flat_green: coincident points");
    const PairGeom g = pair_geom(x, y);
    KernelSecond out = spectral_part(x, y, 2);
    if (g.xu == g.yu) {
        const WaveNumber ks(g.xu ? sp_.k1() : sp_.k2());
        const KernelSecond d = phi_second(ks, x, y);
        out.v += d.v;
        out.gx = out.gx + d.gx;
        out.gy = out.gy + d.gy;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) out.gxy[i][j] += d.gxy[i][j];
    }
    return out;
}

FieldValue TwoLayerFlatGreen::value_refined(Vec2 x, Vec2 y) const {
    const PairGeom g = pair_geom(x, y);
    FieldValue out;
    if (g.xu && g.yu) {
        const auto F = sp_.reflected_upper_refined(g.d, x.x2 + y.x2, 1);
        out.v = F.f;
        out.grad = {g.sgn * F.fd, F.fh1};
        const FieldValue d = phi_field(WaveNumber(sp_.k1()), x, y);
        out.v += d.v;
        out.grad = out.grad + d.grad;
    } else if (g.xu && !g.yu) {
        const auto F = sp_.transmitted_refined(g.d, x.x2, -y.x2, 1);
        out.v = F.f;
        out.grad = {g.sgn * F.fd, F.fh1};
    } else {
        throw std::logic_error("value_refined: oracle implemented for upper/cross pairs");
    }
    return out;
}

FieldValue TwoLayerFlatGreen::far_kernel(Vec2 xhat, Vec2 y) const {
    if (std::abs(xhat.x2) < 1e-12)
        throw std::invalid_argument("far_kernel: grazing observation direction");
    const Complex gam = farfield_gamma(xhat.x2 > 0.0 ? sp_.k1() : sp_.k2());
    const TwoLayerMedium m{WaveNumber(sp_.k1()), WaveNumber(sp_.k2())};
    const FieldValue w0 = planewave_penetrable(m, y, {-xhat.x1, -xhat.x2});
    return {gam * w0.v, {gam * w0.grad.x1, gam * w0.grad.x2}};
}

}  // namespace rtm
