#include "rtm/sommerfeld.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace rtm {

namespace {

constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// 15-point Gauss-Legendre rule on [-1,1]
const double gl_x[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601701,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
const double gl_w[15] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939, 0.1861610000155622, 0.1984314853271116, 0.2025782419255613,
    0.1984314853271116, 0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

struct Accum {
    Complex v[9] = {};
    void add(const Complex* t, double w, int nf) {
        for (int i = 0; i < nf; ++i) v[i] += w * t[i];
    }
    void add(const Accum& o, int nf) {
        for (int i = 0; i < nf; ++i) v[i] += o.v[i];
    }
    double mag(int nf) const {
        double m = 0.0;
        for (int i = 0; i < nf; ++i) m += std::abs(v[i]);
        return m;
    }
};

// Int_X^inf xi^{-m} e^{-z xi} dxi.  m >= 1 via X^{1-m} E_m(zX); m = 0, -1 in
// closed form.
Complex tail_moment(int m, Complex z, double X) {
    if (m <= 0) {
        const Complex e = std::exp(-z * X);
        if (m == 0) return e / z;
        return e * (1.0 + z * X) / (z * z);  // m = -1
    }
    const Complex w = z * X;
    Complex Em;
    if (std::abs(w) < 1e-13) {
        if (m == 1) return Complex(0.0, 0.0);  // log-divergent; caller guards
        Em = Complex(1.0 / (m - 1.0), 0.0);
    } else {
        Em = expint_e1(w);
        const Complex ew = std::exp(-w);
        for (int j = 1; j < m; ++j) Em = (ew - w * Em) / static_cast<double>(j);
    }
    return std::pow(X, 1.0 - m) * Em;
}

}  // namespace

Complex expint_e1(Complex z) {
    const double az = std::abs(z);
    if (az == 0.0) throw std::domain_error("expint_e1: z = 0");
    if (az <= 3.0) {
        Complex sum = 0.0, term = 1.0;
        for (int k = 1; k <= 80; ++k) {
            term *= -z / static_cast<double>(k);
            sum -= term / static_cast<double>(k);
            if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
        }
        return -euler_gamma - std::log(z) + sum;
    }
    Complex c = Complex(1e300, 0.0);
    Complex d = 1.0 / (z + 1.0);
    Complex h = d;
    for (int i = 1; i <= 300; ++i) {
        const double a = -static_cast<double>(i) * i;
        const Complex b = z + (2.0 * i + 1.0);
        d = 1.0 / (b + a * d);
        c = b + a / c;
        const Complex del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-z);
}

TwoLayerSpectral::TwoLayerSpectral(double k1, double k2, double tol)
    : k1_(k1), k2_(k2), kmin_(std::min(k1, k2)), kmax_(std::max(k1, k2)),
      sigma_(k1 * k1 - k2 * k2), tol_(tol) {
    if (!(k1 > 0.0) || !(k2 > 0.0))
        throw std::invalid_argument("TwoLayerSpectral: wavenumbers must be > 0");
}

SpectralFields TwoLayerSpectral::integrate(Family fam, double d, double h1, double h2,
                                           int order, double tol, double refine) const {
    const int nf = order >= 2 ? 9 : (order == 1 ? 4 : 1);
    const double k1sq = k1_ * k1_, k2sq = k2_ * k2_;

    const bool k1_is_max = k1_ >= k2_;
    // qmin/qmax are kmin^2-xi^2 and kmax^2-xi^2 computed in the substitution
    // variable (no cancellation at the branch points)
    auto eval = [&](double xi, double jac, double qmin, double qmax, Complex* t) {
        const Complex b1 = std::sqrt(Complex(k1_is_max ? qmax : qmin, 0.0));
        const Complex b2 = std::sqrt(Complex(k1_is_max ? qmin : qmax, 0.0));
        Complex pre, ef, m1, m2;
        switch (fam) {
            case Family::ReflUpper:
                pre = (iu / b1) * ((b1 - b2) / (b1 + b2));
                ef = std::exp(iu * b1 * h1);
                m1 = iu * b1;
                m2 = 0.0;
                break;
            case Family::ReflLower:
                pre = -(iu / b2) * ((b1 - b2) / (b1 + b2));
                ef = std::exp(iu * b2 * h1);
                m1 = iu * b2;
                m2 = 0.0;
                break;
            case Family::Trans:
                pre = 2.0 * iu / (b1 + b2);
                ef = std::exp(iu * (b1 * h1 + b2 * h2));
                m1 = iu * b1;
                m2 = iu * b2;
                break;
        }
        const Complex base = pre * ef * (jac * 0.5 / pi);
        const double cd = std::cos(xi * d), sd = std::sin(xi * d);
        t[0] = base * cd;
        if (order >= 1) {
            t[1] = base * (-xi * sd);
            t[2] = t[0] * m1;
            t[3] = t[0] * m2;
        }
        if (order >= 2) {
            t[4] = base * (-xi * xi * cd);
            t[5] = t[1] * m1;
            t[6] = t[1] * m2;
            t[7] = t[2] * m1;
            t[8] = t[2] * m2;
        }
    };

    using Map = std::function<void(double, double&, double&, double&, double&)>;

    auto panel = [&](const Map& map, double ua, double ub, Accum& out) {
        const double c = 0.5 * (ua + ub), hw = 0.5 * (ub - ua);
        Complex t[9];
        for (int q = 0; q < 15; ++q) {
            double xi, jac, qmin, qmax;
            map(c + hw * gl_x[q], xi, jac, qmin, qmax);
            eval(xi, jac * hw, qmin, qmax, t);
            out.add(t, gl_w[q], nf);
        }
    };

    std::function<void(const Map&, double, double, const Accum&, double, int, Accum&)> refine_panel =
        [&](const Map& map, double ua, double ub, const Accum& whole, double tol_here, int depth,
            Accum& out) {
            const double um = 0.5 * (ua + ub);
            Accum left, right;
            panel(map, ua, um, left);
            panel(map, um, ub, right);
            Accum sum = left;
            sum.add(right, nf);
            double err = 0.0;
            for (int i = 0; i < nf; ++i) err += std::abs(sum.v[i] - whole.v[i]);
            if (err <= tol_here || depth >= 22) {
                out.add(sum, nf);
                return;
            }
            refine_panel(map, ua, um, left, 0.5 * tol_here, depth + 1, out);
            refine_panel(map, um, ub, right, 0.5 * tol_here, depth + 1, out);
        };

    auto integrate_segment = [&](const Map& map, double phase, double tol_seg, Accum& out) {
        const int n0 = std::clamp(static_cast<int>(std::ceil(phase / 2.0)), 1, 40000);
        for (int j = 0; j < n0; ++j) {
            const double ua = static_cast<double>(j) / n0, ub = static_cast<double>(j + 1) / n0;
            Accum whole;
            panel(map, ua, ub, whole);
            refine_panel(map, ua, ub, whole, tol_seg / n0, 0, out);
        }
    };

    const double hsum = (fam == Family::Trans) ? (h1 + h2) : h1;
    Accum acc;
    const double tol_int = tol / refine;

    // propagating range [0, kmin]: xi = kmin sin(pi u/2) removes the branch
    // structure at kmin and the 1/beta blowup when that beta sits downstairs
    {
        Map map = [&](double u, double& xi, double& jac, double& qmin, double& qmax) {
            const double cu = std::cos(0.5 * pi * u);
            xi = kmin_ * std::sin(0.5 * pi * u);
            jac = kmin_ * 0.5 * pi * cu;
            qmin = kmin_ * kmin_ * cu * cu;
            qmax = (kmax_ * kmax_ - kmin_ * kmin_) + qmin;
        };
        integrate_segment(map, kmin_ * d + kmax_ * hsum + 4.0, tol_int * 0.25, acc);
    }
    // [kmin, kmax] split at the rms midpoint with endpoint substitutions
    if (kmax_ > kmin_ * (1.0 + 1e-14)) {
        const double xim = std::sqrt(0.5 * (kmin_ * kmin_ + kmax_ * kmax_));
        const double vm = std::sqrt(xim * xim - kmin_ * kmin_);
        const double dk = kmax_ * kmax_ - kmin_ * kmin_;
        Map map2 = [&](double u, double& xi, double& jac, double& qmin, double& qmax) {
            const double v = vm * u;
            xi = std::sqrt(kmin_ * kmin_ + v * v);
            jac = vm * v / xi;
            qmin = -v * v;
            qmax = dk - v * v;
        };
        integrate_segment(map2, (xim - kmin_) * d + vm * hsum + 4.0, tol_int * 0.125, acc);
        const double um = std::sqrt(kmax_ * kmax_ - xim * xim);
        Map map3 = [&](double u, double& xi, double& jac, double& qmin, double& qmax) {
            const double w = um * (1.0 - u);
            xi = std::sqrt(kmax_ * kmax_ - w * w);
            jac = um * w / xi;
            qmax = w * w;
            qmin = w * w - dk;
        };
        integrate_segment(map3, (kmax_ - xim) * d + um * hsum + 4.0, tol_int * 0.125, acc);
    }

    // evanescent range: xi = sqrt(kmax^2 + w^2) on growing panels, finished
    // by an analytic exponential-integral tail
    {
        const double scale = std::max({d, hsum, 0.05 / kmax_});
        const double c_model = (fam == Family::Trans) ? std::pow(kmax_, 4.0) / (16.0 * pi)
                                                      : std::abs(sigma_) * kmax_ * kmax_ + 1.0;
        double Xfar = std::max(8.0 * kmax_, std::pow(c_model / (tol_int * scale), 0.25));
        Xfar = std::min(Xfar, 6000.0 * kmax_);
        const double wfar = std::sqrt(std::max(Xfar * Xfar - kmax_ * kmax_, kmax_ * kmax_));

        double w0 = 0.0;
        double panel_w = 0.5 * kmax_;
        const double osc_cap = pi / std::max(d, 1e-3);
        int quiet = 0;
        while (w0 < wfar) {
            const double w1 = std::min(w0 + std::min(panel_w, osc_cap), wfar);
            Map mseg = [&, w0, w1](double u, double& xi, double& jac, double& qmin, double& qmax) {
                const double w = w0 + (w1 - w0) * u;
                xi = std::sqrt(kmax_ * kmax_ + w * w);
                jac = (w1 - w0) * w / xi;
                qmax = -w * w;
                qmin = -(w * w + (kmax_ * kmax_ - kmin_ * kmin_));
            };
            Accum whole;
            panel(mseg, 0.0, 1.0, whole);
            Accum got;
            refine_panel(mseg, 0.0, 1.0, whole, tol_int * 0.05, 0, got);
            acc.add(got, nf);
            w0 = w1;
            panel_w *= 1.7;
            if (got.mag(nf) < tol_int * 0.02) {
                if (++quiet >= 2 && w0 * hsum > 3.0) break;
            } else {
                quiet = 0;
            }
        }

        const double X = std::sqrt(kmax_ * kmax_ + w0 * w0);
        if (!(hsum * X > 40.0)) {
            const Complex z(hsum, -d);
            struct Term {
                double A;
                int m;
            };
            std::vector<Term> model;
            if (fam == Family::Trans) {
                const double e2 = 0.5 * (k1sq * h1 + k2sq * h2);
                model = {{1.0 / (2.0 * pi), 1},
                         {e2 / (2.0 * pi), 2},
                         {(0.25 * (k1sq + k2sq) + 0.5 * e2 * e2) / (2.0 * pi), 3}};
            } else {
                const double A0 = (fam == Family::ReflUpper ? -1.0 : 1.0) * sigma_ / (8.0 * pi);
                const double ks = (fam == Family::ReflUpper) ? k1sq : k2sq;
                const double ko = (fam == Family::ReflUpper) ? k2sq : k1sq;
                model = {{A0, 3},
                         {A0 * 0.5 * ks * h1, 4},
                         {A0 * (0.5 * (2.0 * ks + ko) + 0.125 * ks * ks * h1 * h1), 5}};
            }
            auto add_tail = [&](int field, int shift, Complex mult) {
                Complex total = 0.0;
                for (const auto& tm : model) {
                    const int m = tm.m + shift;
                    if (m == 1 && std::abs(z) * X < 1e-12) continue;  // singular guard
                    total += tm.A * mult * tail_moment(m, z, X);
                }
                acc.v[field] += Complex(total.real(), 0.0);
            };
            add_tail(0, 0, Complex(1.0, 0.0));
            if (order >= 1) {
                add_tail(1, -1, iu);
                add_tail(2, -1, Complex(-1.0, 0.0));
                if (fam == Family::Trans) add_tail(3, -1, Complex(-1.0, 0.0));
            }
            if (order >= 2) {
                add_tail(4, -2, Complex(-1.0, 0.0));
                add_tail(5, -2, -iu);
                if (fam == Family::Trans) add_tail(6, -2, -iu);
                add_tail(7, -2, Complex(1.0, 0.0));
                if (fam == Family::Trans) add_tail(8, -2, Complex(1.0, 0.0));
            }
        }
    }

    SpectralFields out;
    out.f = acc.v[0];
    out.fd = acc.v[1];
    out.fh1 = acc.v[2];
    out.fh2 = acc.v[3];
    out.fdd = acc.v[4];
    out.fdh1 = acc.v[5];
    out.fdh2 = acc.v[6];
    out.fh1h1 = acc.v[7];
    out.fh1h2 = acc.v[8];
    return out;
}

SpectralFields TwoLayerSpectral::reflected_upper(double d, double s, int order) const {
    if (sigma_ == 0.0) return {};
    if (s < 0.0 || d < 0.0) throw std::invalid_argument("reflected_upper: d, s must be >= 0");
    return integrate(Family::ReflUpper, d, s, 0.0, order, tol_, 1.0);
}

SpectralFields TwoLayerSpectral::reflected_lower(double d, double s, int order) const {
    if (sigma_ == 0.0) return {};
    if (s < 0.0 || d < 0.0) throw std::invalid_argument("reflected_lower: d, s must be >= 0");
    return integrate(Family::ReflLower, d, s, 0.0, order, tol_, 1.0);
}

SpectralFields TwoLayerSpectral::transmitted(double d, double a, double b, int order) const {
    if (a < 0.0 || b < 0.0 || d < 0.0)
        throw std::invalid_argument("transmitted: d, a, b must be >= 0");
    return integrate(Family::Trans, d, a, b, order, tol_, 1.0);
}

SpectralFields TwoLayerSpectral::reflected_upper_refined(double d, double s, int order) const {
    if (sigma_ == 0.0) return {};
    return integrate(Family::ReflUpper, d, s, 0.0, order, tol_, 100.0);
}

SpectralFields TwoLayerSpectral::transmitted_refined(double d, double a, double b, int order) const {
    return integrate(Family::Trans, d, a, b, order, tol_, 100.0);
}

}  // namespace rtm
