#include "rtm/forward.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "rtm/panelquad.hpp"
#include "rtm/rng.hpp"
#include "rtm/specfun.hpp"

namespace rtm {

namespace {

constexpr double euler_gamma = 0.57721566490153286060651209008240243;

}  // namespace

// --------------------------------------------------------------------------
// Impenetrable Nystrom operator
// --------------------------------------------------------------------------

namespace {

constexpr double kEulerGamma2 = 0.57721566490153286060651209008240243;

panelquad::RowKernel free_sl_kernel(double k) {
    panelquad::RowKernel K;
    K.full = [k](Vec2 x, const CurveNode& nd) {
        const double r = dist(x, nd.pos);
        return 0.25 * iu * hankel1(0, k * r);
    };
    K.logP = [k](Vec2 x, const CurveNode& nd) {
        const double r = dist(x, nd.pos);
        return Complex(-bessel_j(0, k * r) / (2.0 * pi), 0.0);
    };
    K.self_q = [k](const CurveNode&) {
        return Complex(-(std::log(0.5 * k) + kEulerGamma2) / (2.0 * pi), 0.25);
    };
    return K;
}

panelquad::RowKernel free_dl_kernel(double k) {
    panelquad::RowKernel K;
    K.full = [k](Vec2 x, const CurveNode& nd) {
        const double r = dist(x, nd.pos);
        const Vec2 e{(x.x1 - nd.pos.x1) / r, (x.x2 - nd.pos.x2) / r};
        return 0.25 * iu * k * hankel1(1, k * r) * dot(e, nd.normal);
    };
    K.logP = [k](Vec2 x, const CurveNode& nd) {
        const double r = dist(x, nd.pos);
        if (r < 1e-14) return Complex(0.0, 0.0);
        const Vec2 e{(x.x1 - nd.pos.x1) / r, (x.x2 - nd.pos.x2) / r};
        return Complex(-(k / (2.0 * pi)) * bessel_j(1, k * r) * dot(e, nd.normal), 0.0);
    };
    K.self_q = [](const CurveNode& nd) { return Complex(nd.curvature / (4.0 * pi), 0.0); };
    return K;
}

panelquad::RowKernel free_adj_kernel(double k, Vec2 nux) {
    panelquad::RowKernel K;
    K.full = [k, nux](Vec2 x, const CurveNode& nd) {
        const double r = dist(x, nd.pos);
        const Vec2 e{(x.x1 - nd.pos.x1) / r, (x.x2 - nd.pos.x2) / r};
        return -0.25 * iu * k * hankel1(1, k * r) * dot(e, nux);
    };
    K.logP = [k, nux](Vec2 x, const CurveNode& nd) {
        const double r = dist(x, nd.pos);
        if (r < 1e-14) return Complex(0.0, 0.0);
        const Vec2 e{(x.x1 - nd.pos.x1) / r, (x.x2 - nd.pos.x2) / r};
        return Complex((k / (2.0 * pi)) * bessel_j(1, k * r) * dot(e, nux), 0.0);
    };
    K.self_q = [](const CurveNode& nd) { return Complex(nd.curvature / (4.0 * pi), 0.0); };
    return K;
}

panelquad::RowKernel combine_kernels(const panelquad::RowKernel& A, Complex cA,
                                     const panelquad::RowKernel& B, Complex cB) {
    panelquad::RowKernel K;
    K.full = [=](Vec2 x, const CurveNode& nd) { return cA * A.full(x, nd) + cB * B.full(x, nd); };
    K.logP = [=](Vec2 x, const CurveNode& nd) { return cA * A.logP(x, nd) + cB * B.logP(x, nd); };
    K.self_q = [=](const CurveNode& nd) { return cA * A.self_q(nd) + cB * B.self_q(nd); };
    return K;
}

}  // namespace

BoundaryIntegralOperator::BoundaryIntegralOperator(const DiscretizedCurve& curve,
                                                   BoundaryKind kind, WaveNumber k)
    : curve_(curve), kind_(kind), k_(k), eta_(k.value) {
    const int n = static_cast<int>(curve_.size());
    if (n == 0) throw std::invalid_argument("BoundaryIntegralOperator: empty curve");
    mat_.setZero(n, n);
    const double kk = k_.value;

#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const CurveNode& ni = curve_.nodes[i];
        std::vector<Complex> row(n, Complex(0.0));
        if (kind_ == BoundaryKind::Dirichlet) {
            const auto K = combine_kernels(free_dl_kernel(kk), Complex(1.0),
                                           free_sl_kernel(kk), -iu * eta_);
            panelquad::accumulate_row(curve_, ni.pos, i, K, row.data());
            row[i] += 0.5;
        } else {
            const auto K = free_adj_kernel(kk, ni.normal);
            panelquad::accumulate_row(curve_, ni.pos, i, K, row.data());
            row[i] += -0.5;
        }
        for (int j = 0; j < n; ++j) mat_(i, j) = row[j];
    }
    lu_.compute(mat_);
    rcond_ = lu_.rcond();
    if (!(rcond_ > 1e-12))
        throw std::runtime_error(
            "BoundaryIntegralOperator: system ill-conditioned; refine the mesh or change the "
            "coupling parameter");
}

Eigen::VectorXcd BoundaryIntegralOperator::solve(const Eigen::VectorXcd& g) const {
    Eigen::VectorXcd x = lu_.solve(g);
    const double gn = g.norm();
    if (gn > 0.0) {
        const double res = (mat_ * x - g).norm() / gn;
        if (!(res <= 1e-10))
            throw std::runtime_error("BoundaryIntegralOperator: solve residual too large");
    }
    return x;
}

FieldValue BoundaryIntegralOperator::potential(const Eigen::VectorXcd& density, Vec2 x) const {
    FieldValue out;
    const int n = static_cast<int>(curve_.size());
    for (int j = 0; j < n; ++j) {
        const CurveNode& nj = curve_.nodes[j];
        const Complex c = density[j] * nj.weight;
        const KernelSecond ps = phi_second(k_, x, nj.pos);
        if (kind_ == BoundaryKind::Dirichlet) {
            const Complex K = ps.gy.x1 * nj.normal.x1 + ps.gy.x2 * nj.normal.x2;
            out.v += c * (K - iu * eta_ * ps.v);
            out.grad.x1 += c * (ps.gxy[0][0] * nj.normal.x1 + ps.gxy[0][1] * nj.normal.x2 -
                                iu * eta_ * ps.gx.x1);
            out.grad.x2 += c * (ps.gxy[1][0] * nj.normal.x1 + ps.gxy[1][1] * nj.normal.x2 -
                                iu * eta_ * ps.gx.x2);
        } else {
            out.v += c * ps.v;
            out.grad.x1 += c * ps.gx.x1;
            out.grad.x2 += c * ps.gx.x2;
        }
    }
    return out;
}

Complex BoundaryIntegralOperator::far_field(const Eigen::VectorXcd& density, Vec2 xhat) const {
    Complex out = 0.0;
    const double kk = k_.value;
    const int n = static_cast<int>(curve_.size());
    for (int j = 0; j < n; ++j) {
        const CurveNode& nj = curve_.nodes[j];
        const Complex e = std::exp(-iu * kk * dot(xhat, nj.pos));
        if (kind_ == BoundaryKind::Dirichlet)
            out += density[j] * nj.weight * (-iu * kk * dot(xhat, nj.normal) - iu * eta_) * e;
        else
            out += density[j] * nj.weight * e;
    }
    return farfield_gamma(kk) * out;
}

Complex BoundaryIntegralOperator::boundary_trace(const Eigen::VectorXcd& density, Vec2 x) const {
    const int n = static_cast<int>(curve_.size());
    // interpolate the density and normal on the nearest panel
    int best = 0;
    double bd = 1e300;
    for (std::size_t p = 0; p < curve_.panels.size(); ++p) {
        const double d = dist(x, curve_.panels[p].center);
        if (d < bd) {
            bd = d;
            best = static_cast<int>(p);
        }
    }
    const auto& pan = curve_.panels[best];
    const double tau = dot(x - pan.center, pan.tangent);
    const double t = 0.774596669241483 * 0.5 * pan.len;
    const double l0 = tau * (tau - t) / (2.0 * t * t);
    const double l1 = 1.0 - tau * tau / (t * t);
    const double l2 = tau * (tau + t) / (2.0 * t * t);
    const Complex phi_here = l0 * density[pan.first_node] + l1 * density[pan.first_node + 1] +
                             l2 * density[pan.first_node + 2];
    Vec2 nu{};
    for (int q = 0; q < 3; ++q) {
        nu.x1 += curve_.nodes[pan.first_node + q].normal.x1 / 3.0;
        nu.x2 += curve_.nodes[pan.first_node + q].normal.x2 / 3.0;
    }
    const double nn = norm(nu);
    nu = {nu.x1 / nn, nu.x2 / nn};

    const double kk = k_.value;
    std::vector<Complex> row(n, Complex(0.0));
    if (kind_ == BoundaryKind::Dirichlet) {
        const auto K = combine_kernels(free_dl_kernel(kk), Complex(1.0), free_sl_kernel(kk),
                                       -iu * eta_);
        panelquad::accumulate_row(curve_, x, -1, K, row.data());
    } else {
        const auto K = free_adj_kernel(kk, nu);
        panelquad::accumulate_row(curve_, x, -1, K, row.data());
    }
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) acc += row[j] * density[j];
    const double jump = (kind_ == BoundaryKind::Dirichlet) ? 0.5 : -0.5;
    return jump * phi_here + acc;
}

// --------------------------------------------------------------------------
// Impenetrable solutions
// --------------------------------------------------------------------------

ImpenetrableSolution solve_impenetrable_pointsource(
    const std::shared_ptr<const BoundaryIntegralOperator>& op, Vec2 xs) {
    const auto& c = op->curve();
    const WaveNumber k(op->k());
    Eigen::VectorXcd g(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        const FieldValue v0 = halfplane_green(op->kind(), k, c.nodes[j].pos, xs);
        g[j] = (op->kind() == BoundaryKind::Dirichlet) ? -v0.v : -dot(v0.grad, c.nodes[j].normal);
    }
    ImpenetrableSolution sol;
    sol.op_ = op;
    sol.plane_wave_ = false;
    sol.source_ = xs;
    sol.density_ = op->solve(g);
    return sol;
}

ImpenetrableSolution solve_impenetrable_planewave(
    const std::shared_ptr<const BoundaryIntegralOperator>& op, Vec2 d) {
    if (std::abs(norm(d) - 1.0) > 1e-12)
        throw std::invalid_argument("solve_impenetrable_planewave: |d| must be 1");
    const auto& c = op->curve();
    const WaveNumber k(op->k());
    Eigen::VectorXcd g(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        const FieldValue w0 = planewave_impenetrable(op->kind(), k, c.nodes[j].pos, d);
        g[j] = (op->kind() == BoundaryKind::Dirichlet) ? -w0.v : -dot(w0.grad, c.nodes[j].normal);
    }
    ImpenetrableSolution sol;
    sol.op_ = op;
    sol.plane_wave_ = true;
    sol.source_ = d;
    sol.density_ = op->solve(g);
    return sol;
}

FieldValue ImpenetrableSolution::correction(Vec2 x) const { return op_->potential(density_, x); }

Complex ImpenetrableSolution::correction_far(Vec2 xhat) const {
    return op_->far_field(density_, xhat);
}

FieldValue ImpenetrableSolution::scattered(Vec2 x) const {
    FieldValue out = correction(x);
    if (!plane_wave_) {
        // u_s = (v0 - Phi)(., xs) + psi = -/+ Phi(., xs') + psi
        const Vec2 img{source_.x1, -source_.x2};
        const double s = (op_->kind() == BoundaryKind::Dirichlet) ? -1.0 : 1.0;
        const FieldValue pim = phi_field(WaveNumber(op_->k()), x, img);
        out.v += s * pim.v;
        out.grad = out.grad + CVec2{s * pim.grad.x1, s * pim.grad.x2};
    }
    return out;
}

Complex ImpenetrableSolution::scattered_far(Vec2 xhat) const {
    Complex out = correction_far(xhat);
    if (!plane_wave_) {
        const Vec2 img{source_.x1, -source_.x2};
        const double s = (op_->kind() == BoundaryKind::Dirichlet) ? -1.0 : 1.0;
        out += s * farfield_gamma(op_->k()) * std::exp(-iu * op_->k() * dot(xhat, img));
    }
    return out;
}

FieldValue ImpenetrableSolution::total(Vec2 x) const {
    FieldValue out = correction(x);
    const WaveNumber k(op_->k());
    const FieldValue inc = plane_wave_ ? planewave_impenetrable(op_->kind(), k, x, source_)
                                       : halfplane_green(op_->kind(), k, x, source_);
    out.v += inc.v;
    out.grad = out.grad + inc.grad;
    return out;
}

// --------------------------------------------------------------------------
// Contrast-region boundaries
// --------------------------------------------------------------------------

namespace {

std::vector<std::pair<double, double>> sign_intervals(const SurfaceProfile& p, double A, int sign) {
    const int N = 8192;
    std::vector<std::pair<double, double>> out;
    auto val = [&](double x) { return sign * profile_eval(p, x); };
    double left = 0.0;
    bool inside = false;
    double prev_x = -A;
    bool was = val(-A) > 1e-13;
    if (was) {
        left = -A;
        inside = true;
    }
    for (int i = 1; i <= N; ++i) {
        const double x = -A + 2.0 * A * i / N;
        const bool now = val(x) > 1e-13;
        if (now && !was) {
            double lo = prev_x, hi = x;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (val(mid) > 1e-13 ? hi : lo) = mid;
            }
            left = 0.5 * (lo + hi);
            inside = true;
        }
        if (!now && was && inside) {
            double lo = prev_x, hi = x;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (val(mid) > 1e-13 ? lo : hi) = mid;
            }
            out.emplace_back(left, 0.5 * (lo + hi));
            inside = false;
        }
        prev_x = x;
        was = now;
    }
    if (inside) out.emplace_back(left, A);
    std::vector<std::pair<double, double>> keep;
    for (auto [a, b] : out) {
        if (b - a < 1e-6) continue;
        double m = 0.0;
        for (int i = 0; i <= 20; ++i)
            m = std::max(m, std::abs(profile_eval(p, a + (b - a) * i / 20.0)));
        if (m > 1e-9) keep.emplace_back(a, b);
    }
    return keep;
}

}  // namespace

std::vector<ContrastCurve> contrast_curves(const SurfaceProfile& p, const TwoLayerMedium& m,
                                           double nodes_per_wavelength, int grading_levels) {
    const double kmax = std::max(m.k1.value, m.k2.value);
    const double h = 2.0 * pi / kmax / nodes_per_wavelength;
    std::vector<ContrastCurve> out;

    auto add_curve = [&](std::vector<CurvePiece> pieces, double k_int, double a, double b,
                         bool above) {
        ContrastCurve cc;
        cc.curve = discretize_pieces(pieces, h, grading_levels);
        cc.curve.nodes_per_wavelength = nodes_per_wavelength;
        cc.k_int = k_int;
        cc.a = a;
        cc.b = b;
        cc.above = above;
        out.push_back(std::move(cc));
    };

    switch (p.kind) {
        case ProfileKind::Flat:
            break;
        case ProfileKind::GammaRDip: {
            const double R = p.dip_radius;
            std::vector<CurvePiece> pieces;
            pieces.push_back(CurvePiece::line({-R, 0.0}, {R, 0.0}, true, true));
            pieces.push_back(CurvePiece::arc({0.0, 0.0}, R, 0.0, -pi, true, true));
            add_curve(std::move(pieces), m.k1.value, -R, R, false);
            break;
        }
        case ProfileKind::F3: {
            const double lv[3] = {-0.2, -0.3, -0.2};
            const double xr[3][2] = {{-4.0, -3.0}, {-1.0, 1.0}, {3.0, 4.0}};
            for (int b = 0; b < 3; ++b) {
                std::vector<CurvePiece> pieces;
                pieces.push_back(CurvePiece::line({xr[b][0], 0.0}, {xr[b][1], 0.0}, true, true));
                pieces.push_back(CurvePiece::line({xr[b][1], 0.0}, {xr[b][1], lv[b]}, true, true));
                pieces.push_back(CurvePiece::line({xr[b][1], lv[b]}, {xr[b][0], lv[b]}, true, true));
                pieces.push_back(CurvePiece::line({xr[b][0], lv[b]}, {xr[b][0], 0.0}, true, true));
                add_curve(std::move(pieces), m.k1.value, xr[b][0], xr[b][1], false);
            }
            break;
        }
        default: {
            const double A = p.support_halfwidth;
            for (auto [a, b] : sign_intervals(p, A, +1)) {
                std::vector<CurvePiece> pieces;
                pieces.push_back(CurvePiece::graph(p, a, b, true, true));
                pieces.push_back(CurvePiece::line({b, 0.0}, {a, 0.0}, true, true));
                add_curve(std::move(pieces), m.k2.value, a, b, true);
            }
            for (auto [a, b] : sign_intervals(p, A, -1)) {
                std::vector<CurvePiece> pieces;
                pieces.push_back(CurvePiece::line({a, 0.0}, {b, 0.0}, true, true));
                pieces.push_back(CurvePiece::graph(p, b, a, true, true));
                add_curve(std::move(pieces), m.k1.value, a, b, false);
            }
            break;
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// Transmission solver
// --------------------------------------------------------------------------

TransmissionSolver::TransmissionSolver(const SurfaceProfile& p, const TwoLayerMedium& m,
                                       double nodes_per_wavelength, double tol)
    : medium_(m), v0_(std::make_shared<TwoLayerFlatGreen>(m.k1, m.k2, tol)), profile_(p) {
    // zero contrast: the flat background is the exact solution everywhere
    curves_ = m.sigma() == 0.0 ? std::vector<ContrastCurve>{}
                               : contrast_curves(p, m, nodes_per_wavelength);
    offset_.resize(curves_.size() + 1, 0);
    for (std::size_t c = 0; c < curves_.size(); ++c)
        offset_[c + 1] = offset_[c] + static_cast<int>(curves_[c].curve.size());
    total_nodes_ = offset_.back();
    if (total_nodes_ == 0) return;  // flat interface: background is exact

    const int N = static_cast<int>(total_nodes_);
    mat_.setZero(2 * N, 2 * N);

    // panel-aware assembly; the layered kernel is evaluated once per
    // (target, source node) and feeds both the value and the flux row
    std::vector<const CurveNode*> all_nodes(N);
    std::vector<int> node_curve(N);
    for (std::size_t c = 0; c < curves_.size(); ++c)
        for (std::size_t j = 0; j < curves_[c].curve.size(); ++j) {
            all_nodes[offset_[c] + j] = &curves_[c].curve.nodes[j];
            node_curve[offset_[c] + j] = static_cast<int>(c);
        }

#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < N; ++i) {
        const CurveNode& ni = *all_nodes[i];
        const int ci = node_curve[i];
        const double kint = curves_[ci].k_int;
        const Vec2 x = ni.pos;
        const Vec2 nux = ni.normal;
        const double kside_x = x.x2 >= 0.0 ? medium_.k1.value : medium_.k2.value;

        for (std::size_t c = 0; c < curves_.size(); ++c) {
            const auto& crv = curves_[c].curve;
            const int off = offset_[c];
            for (const auto& pan : crv.panels) {
                const double dpan = dist(x, pan.center);
                const bool self_here = (static_cast<int>(c) == ci) &&
                                       i - off >= pan.first_node && i - off < pan.first_node + 3;
                if (!self_here && dpan > 2.5 * pan.len) {
                    for (int q = 0; q < 3; ++q) {
                        const int jj = off + pan.first_node + q;
                        const CurveNode& nj = crv.nodes[pan.first_node + q];
                        const FieldValue v0f = v0_->value(x, nj.pos);
                        mat_(i, jj) += nj.weight * v0f.v;
                        mat_(N + i, jj) += nj.weight * dot(v0f.grad, nux);
                    }
                    continue;
                }
                const Vec2 pp = x - pan.center;
                const double a = dot(pp, pan.tangent);
                const double b = std::sqrt(std::max(0.0, dot(pp, pp) - a * a));
                double M[3], W[3];
                panelquad::log_moments(a, b, -0.5 * pan.len, 0.5 * pan.len, M);
                panelquad::lagrange_weights(pan.len, M, W);
                for (int q = 0; q < 3; ++q) {
                    const int jj = off + pan.first_node + q;
                    const CurveNode& nj = crv.nodes[pan.first_node + q];
                    const bool same_side = (x.x2 >= 0.0) == (nj.pos.x2 >= 0.0);
                    const double kside = nj.pos.x2 >= 0.0 ? medium_.k1.value : medium_.k2.value;
                    if (jj == i) {
                        const KernelSecond sp = v0_->spectral_part(x, x, 1);
                        const Complex qS = Complex(0.0, 0.25) -
                                           (std::log(0.5 * kside_x) + kEulerGamma2) / (2.0 * pi) +
                                           sp.v;
                        const Complex qA = ni.curvature / (4.0 * pi) + sp.gx.x1 * nux.x1 +
                                           sp.gx.x2 * nux.x2;
                        const Complex PS(-1.0 / (2.0 * pi), 0.0);
                        mat_(i, jj) += nj.weight * qS + PS * W[q];
                        mat_(N + i, jj) += nj.weight * qA;
                        continue;
                    }
                    const double r = dist(x, nj.pos);
                    const Vec2 e{(x.x1 - nj.pos.x1) / r, (x.x2 - nj.pos.x2) / r};
                    const FieldValue v0f = v0_->value(x, nj.pos);
                    const Complex PS(same_side ? -bessel_j(0, kside * r) / (2.0 * pi)
                                               : -1.0 / (2.0 * pi),
                                     0.0);
                    const Complex PA(same_side ? (kside / (2.0 * pi)) * bessel_j(1, kside * r) *
                                                     dot(e, nux)
                                               : 0.0,
                                     0.0);
                    mat_(i, jj) += nj.weight * (v0f.v - PS * std::log(r)) + PS * W[q];
                    mat_(N + i, jj) +=
                        nj.weight * (dot(v0f.grad, nux) - PA * std::log(r)) + PA * W[q];
                }
            }
        }
        mat_(N + i, i) += -0.5;

        // interior free-space kernels on the own curve
        {
            const auto& crv = curves_[ci].curve;
            const int off = offset_[ci];
            const int nloc = static_cast<int>(crv.size());
            std::vector<Complex> rowS(nloc, Complex(0.0)), rowA(nloc, Complex(0.0));
            panelquad::accumulate_row(crv, x, i - off, free_sl_kernel(kint), rowS.data());
            panelquad::accumulate_row(crv, x, i - off, free_adj_kernel(kint, nux), rowA.data());
            for (int j = 0; j < nloc; ++j) {
                mat_(i, N + off + j) -= rowS[j];
                mat_(N + i, N + off + j) -= rowA[j];
            }
            mat_(N + i, N + i) -= 0.5;
        }
    }
    lu_.compute(mat_);
    rcond_ = lu_.rcond();
    if (!(rcond_ > 1e-14)) throw std::runtime_error("TransmissionSolver: system ill-conditioned");
}

int TransmissionSolver::region_of(Vec2 x) const {
    for (std::size_t c = 0; c < curves_.size(); ++c) {
        const auto& cc = curves_[c];
        if (profile_.kind == ProfileKind::GammaRDip) {
            const double R = profile_.dip_radius;
            if (x.x2 < 0.0 && x.x1 * x.x1 + x.x2 * x.x2 < R * R) return static_cast<int>(c);
            continue;
        }
        if (x.x1 <= cc.a || x.x1 >= cc.b) continue;
        const double f = profile_eval(profile_, x.x1);
        if (cc.above) {
            if (x.x2 > 0.0 && x.x2 < f) return static_cast<int>(c);
        } else {
            if (x.x2 < 0.0 && x.x2 > f) return static_cast<int>(c);
        }
    }
    return -1;
}

Eigen::VectorXcd TransmissionSolver::assemble_rhs(bool plane_wave, Vec2 src, int src_region) const {
    const int N = static_cast<int>(total_nodes_);
    Eigen::VectorXcd rhs(2 * N);
    for (std::size_t c = 0; c < curves_.size(); ++c) {
        for (std::size_t j = 0; j < curves_[c].curve.size(); ++j) {
            const CurveNode& nd = curves_[c].curve.nodes[j];
            const int row = offset_[c] + static_cast<int>(j);
            if (src_region >= 0 && src_region != static_cast<int>(c)) {
                rhs[row] = 0.0;
                rhs[N + row] = 0.0;
                continue;
            }
            FieldValue inc;
            double sign;
            if (src_region < 0) {
                inc = plane_wave ? planewave_penetrable(medium_, nd.pos, src)
                                 : v0_->value(nd.pos, src);
                sign = -1.0;
            } else {
                inc = phi_field(WaveNumber(curves_[c].k_int), nd.pos, src);
                sign = 1.0;
            }
            rhs[row] = sign * inc.v;
            rhs[N + row] = sign * dot(inc.grad, nd.normal);
        }
    }
    return rhs;
}

TransmissionSolver::Solution TransmissionSolver::solve_pointsource(Vec2 xs) const {
    Solution sol;
    sol.owner = this;
    sol.plane_wave = false;
    sol.source = xs;
    sol.source_region = region_of(xs);
    if (total_nodes_ == 0) return sol;
    const Eigen::VectorXcd rhs = assemble_rhs(false, xs, sol.source_region);
    const Eigen::VectorXcd x = lu_.solve(rhs);
    const double rn = rhs.norm();
    if (rn > 0 && !((mat_ * x - rhs).norm() / rn <= 1e-8))
        throw std::runtime_error("TransmissionSolver: solve residual too large");
    const int N = static_cast<int>(total_nodes_);
    sol.dens_ext = x.head(N);
    sol.dens_int = x.tail(N);
    return sol;
}

TransmissionSolver::Solution TransmissionSolver::solve_planewave(Vec2 d) const {
    if (std::abs(norm(d) - 1.0) > 1e-12)
        throw std::invalid_argument("TransmissionSolver::solve_planewave: |d| must be 1");
    Solution sol;
    sol.owner = this;
    sol.plane_wave = true;
    sol.source = d;
    sol.source_region = -1;
    if (total_nodes_ == 0) return sol;
    const Eigen::VectorXcd rhs = assemble_rhs(true, d, -1);
    const Eigen::VectorXcd x = lu_.solve(rhs);
    const int N = static_cast<int>(total_nodes_);
    sol.dens_ext = x.head(N);
    sol.dens_int = x.tail(N);
    return sol;
}

FieldValue TransmissionSolver::Solution::total(Vec2 x) const {
    const TransmissionSolver& S = *owner;
    if (S.total_nodes_ == 0)
        return plane_wave ? planewave_penetrable(S.medium_, x, source) : S.v0_->value(x, source);
    const int reg = S.region_of(x);
    FieldValue out;
    if (reg < 0) {
        if (source_region < 0)
            out = plane_wave ? planewave_penetrable(S.medium_, x, source) : S.v0_->value(x, source);
        for (std::size_t c = 0; c < S.curves_.size(); ++c) {
            const auto& cc = S.curves_[c].curve;
            for (std::size_t j = 0; j < cc.size(); ++j) {
                const CurveNode& nd = cc.nodes[j];
                const Complex w = dens_ext[S.offset_[c] + j] * nd.weight;
                const FieldValue kv = S.v0_->value(x, nd.pos);
                out.v += w * kv.v;
                out.grad = out.grad + CVec2{w * kv.grad.x1, w * kv.grad.x2};
            }
        }
    } else {
        const WaveNumber kin(S.curves_[reg].k_int);
        if (source_region == reg) {
            const FieldValue inc = phi_field(kin, x, source);
            out.v += inc.v;
            out.grad = out.grad + inc.grad;
        }
        const auto& cc = S.curves_[reg].curve;
        for (std::size_t j = 0; j < cc.size(); ++j) {
            const CurveNode& nd = cc.nodes[j];
            const Complex w = dens_int[S.offset_[reg] + j] * nd.weight;
            const FieldValue kv = phi_field(kin, x, nd.pos);
            out.v += w * kv.v;
            out.grad = out.grad + CVec2{w * kv.grad.x1, w * kv.grad.x2};
        }
    }
    return out;
}

FieldValue TransmissionSolver::Solution::correction(Vec2 x) const {
    const TransmissionSolver& S = *owner;
    FieldValue out = total(x);
    const FieldValue inc =
        plane_wave ? planewave_penetrable(S.medium_, x, source) : S.v0_->value(x, source);
    out.v -= inc.v;
    out.grad = out.grad - inc.grad;
    return out;
}

Complex TransmissionSolver::Solution::correction_far(Vec2 xhat) const {
    const TransmissionSolver& S = *owner;
    Complex out = 0.0;
    if (S.total_nodes_ > 0) {
        for (std::size_t c = 0; c < S.curves_.size(); ++c) {
            const auto& cc = S.curves_[c].curve;
            for (std::size_t j = 0; j < cc.size(); ++j) {
                const CurveNode& nd = cc.nodes[j];
                out += dens_ext[S.offset_[c] + j] * nd.weight * S.v0_->far_kernel(xhat, nd.pos).v;
            }
        }
    }
    if (!plane_wave && source_region >= 0) out -= S.v0_->far_kernel(xhat, source).v;
    return out;
}

TransmissionSolver::Batch TransmissionSolver::make_batch(const std::vector<Vec2>& pts,
                                                          bool with_grad) const {
    Batch b;
    b.owner = this;
    b.pts = pts;
    b.with_grad = with_grad;
    const int P = static_cast<int>(pts.size());
    const int N = static_cast<int>(total_nodes_);
    b.Ev.resize(P, N);
    if (with_grad) {
        b.Eg1.resize(P, N);
        b.Eg2.resize(P, N);
    }
    std::vector<const CurveNode*> all(N);
    for (std::size_t c = 0; c < curves_.size(); ++c)
        for (std::size_t j = 0; j < curves_[c].curve.size(); ++j)
            all[offset_[c] + j] = &curves_[c].curve.nodes[j];
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < P; ++p) {
        if (region_of(pts[p]) >= 0)
            throw std::invalid_argument("TransmissionSolver::make_batch: point inside a contrast region");
        for (int j = 0; j < N; ++j) {
            const FieldValue kv = v0_->value(pts[p], all[j]->pos);
            const double w = all[j]->weight;
            b.Ev(p, j) = w * kv.v;
            if (with_grad) {
                b.Eg1(p, j) = w * kv.grad.x1;
                b.Eg2(p, j) = w * kv.grad.x2;
            }
        }
    }
    return b;
}

std::vector<FieldValue> TransmissionSolver::Batch::eval(const Solution& sol) const {
    const TransmissionSolver& S = *owner;
    const int P = static_cast<int>(pts.size());
    std::vector<FieldValue> out(P);
    if (S.total_nodes_ > 0) {
        const Eigen::VectorXcd v = Ev * sol.dens_ext;
        Eigen::VectorXcd g1, g2;
        if (with_grad) {
            g1 = Eg1 * sol.dens_ext;
            g2 = Eg2 * sol.dens_ext;
        }
        for (int p = 0; p < P; ++p) {
            out[p].v = v[p];
            if (with_grad) out[p].grad = {g1[p], g2[p]};
        }
    }
    if (sol.source_region < 0) {
#pragma omp parallel for schedule(dynamic)
        for (int p = 0; p < P; ++p) {
            const FieldValue inc = sol.plane_wave
                                       ? planewave_penetrable(S.medium_, pts[p], sol.source)
                                       : S.v0_->value(pts[p], sol.source);
            out[p].v += inc.v;
            if (with_grad) out[p].grad = out[p].grad + inc.grad;
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// Volume cells and the Lippmann-Schwinger route
// --------------------------------------------------------------------------

std::vector<VolumeCell> volume_cells(double x1min, double x1max, double x2min, double x2max,
                                     double h, const std::function<int(Vec2)>& region,
                                     double sigma) {
    std::vector<VolumeCell> out;
    const int n1 = std::max(1, static_cast<int>(std::ceil((x1max - x1min) / h)));
    const int n2 = std::max(1, static_cast<int>(std::ceil((x2max - x2min) / h)));
    const double h1 = (x1max - x1min) / n1, h2 = (x2max - x2min) / n2;
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            bool any = false;
            for (int a = 0; a < 4 && !any; ++a)
                for (int b = 0; b < 4 && !any; ++b)
                    any = region({x1min + (i + (a + 0.5) / 4.0) * h1,
                                  x2min + (j + (b + 0.5) / 4.0) * h2}) != 0;
            if (!any) continue;
            double area_p = 0, area_m = 0, cxp = 0, cyp = 0, cxm = 0, cym = 0;
            for (int a = 0; a < 8; ++a)
                for (int b = 0; b < 8; ++b) {
                    const Vec2 q{x1min + (i + (a + 0.5) / 8.0) * h1,
                                 x2min + (j + (b + 0.5) / 8.0) * h2};
                    const int rg = region(q);
                    if (rg > 0) {
                        area_p += 1.0;
                        cxp += q.x1;
                        cyp += q.x2;
                    } else if (rg < 0) {
                        area_m += 1.0;
                        cxm += q.x1;
                        cym += q.x2;
                    }
                }
            const double cell = h1 * h2 / 64.0;
            if (area_p > 0) {
                out.push_back({{cxp / area_p, cyp / area_p}, area_p * cell, sigma, i, j});
            }
            if (area_m > 0) {
                out.push_back({{cxm / area_m, cym / area_m}, area_m * cell, -sigma, i, j});
            }
        }
    }
    return out;
}

VolumeOperator::VolumeOperator(std::vector<VolumeCell> cells,
                               std::shared_ptr<TwoLayerFlatGreen> v0)
    : cells_(std::move(cells)), v0_(std::move(v0)) {
    const int n = static_cast<int>(cells_.size());
    if (n == 0) return;
    mat_.resize(n, n);
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < n; ++i) {
        const Vec2 xi = cells_[i].center;
        for (int j = 0; j < n; ++j) {
            Complex Kij;  // integral of the kernel over cell j
            if (i == j) {
                const double kside = xi.x2 >= 0.0 ? v0_->k1() : v0_->k2();
                const Complex qself = Complex(0.0, 0.25) -
                                      (std::log(0.5 * kside) + euler_gamma) / (2.0 * pi) +
                                      v0_->spectral_part(xi, xi, 0).v;
                const double rho = std::sqrt(cells_[i].weight / pi);
                const double logint = pi * rho * rho * (std::log(rho) - 0.5);
                Kij = cells_[i].weight * qself + (-1.0 / (2.0 * pi)) * logint;
            } else if (std::abs(cells_[i].ix - cells_[j].ix) <= 1 &&
                       std::abs(cells_[i].iy - cells_[j].iy) <= 1) {
                const double w = cells_[j].weight / 9.0;
                const double hh = std::sqrt(cells_[j].weight) / 3.0;
                Kij = 0.0;
                for (int a = -1; a <= 1; ++a)
                    for (int b = -1; b <= 1; ++b)
                        Kij += w * v0_->value(xi, {cells_[j].center.x1 + a * hh,
                                                   cells_[j].center.x2 + b * hh})
                                       .v;
            } else {
                Kij = cells_[j].weight * v0_->value(xi, cells_[j].center).v;
            }
            mat_(i, j) = (i == j ? Complex(1.0) : Complex(0.0)) + cells_[j].contrast * Kij;
        }
    }
    lu_.compute(mat_);
}

Eigen::VectorXcd VolumeOperator::solve(const Eigen::VectorXcd& inc) const {
    if (cells_.empty()) return inc;
    Eigen::VectorXcd u = lu_.solve(inc);
    const double in = inc.norm();
    if (in > 0 && !((mat_ * u - inc).norm() / in <= 1e-8))
        throw std::runtime_error("VolumeOperator: solve residual too large");
    return u;
}

FieldValue VolumeOperator::scattered(const Eigen::VectorXcd& u, Vec2 x) const {
    FieldValue out;
    for (std::size_t j = 0; j < cells_.size(); ++j) {
        const FieldValue kv = v0_->value(x, cells_[j].center);
        const Complex c = -cells_[j].contrast * cells_[j].weight * u[j];
        out.v += c * kv.v;
        out.grad = out.grad + CVec2{c * kv.grad.x1, c * kv.grad.x2};
    }
    return out;
}

Complex VolumeOperator::scattered_far(const Eigen::VectorXcd& u, Vec2 xhat) const {
    Complex out = 0.0;
    for (std::size_t j = 0; j < cells_.size(); ++j)
        out +=
            -cells_[j].contrast * cells_[j].weight * u[j] * v0_->far_kernel(xhat, cells_[j].center).v;
    return out;
}

// --------------------------------------------------------------------------
// Synthetic data
// --------------------------------------------------------------------------

double ScatterData::frobenius() const {
    double s = 0.0;
    for (const auto& z : m) s += std::norm(z);
    return std::sqrt(s);
}

ScatterData synthesize_data(const ForwardConfig& cfg) {
    ScatterData out;
    out.kind = cfg.kind;
    out.regime = cfg.regime;
    out.N_s = cfg.N_s;
    out.N_r = cfg.N_r;
    out.k1 = cfg.k1;
    out.k2 = cfg.kind == SurfaceKind::Penetrable ? cfg.k2 : cfg.k1;
    out.R = cfg.R;
    out.R_s = cfg.R_s;
    out.R_r = cfg.R_r;
    out.tau = 0.0;
    out.seed = cfg.seed;
    out.m.assign(static_cast<std::size_t>(cfg.N_s) * cfg.N_r, Complex(0.0));

    AcquisitionGeometry g;
    g.regime = cfg.regime;
    g.aperture =
        cfg.kind == SurfaceKind::Penetrable ? Aperture::FullCircle : Aperture::UpperSemicircle;
    g.R_s = cfg.regime == Regime::Near ? cfg.R_s : 1.0;
    g.R_r = cfg.regime == Regime::Near ? cfg.R_r : 1.0;
    g.N_s = cfg.N_s;
    g.N_r = cfg.N_r;
    const auto acq = acquisition_points(g, cfg.regime == Regime::Near ? cfg.R : 0.0);

    const WaveNumber k1(cfg.k1);
    const auto dip = SurfaceProfile::gammaR_dip(cfg.R);

    if (cfg.kind != SurfaceKind::Penetrable) {
        const BoundaryKind bk =
            cfg.kind == SurfaceKind::Dirichlet ? BoundaryKind::Dirichlet : BoundaryKind::Neumann;
        const double W = cfg.wing_wavelengths * k1.wavelength();
        const double Wx = cfg.wing_extension_factor * W;
        const auto curve_true = discretize_surface(cfg.profile, k1, cfg.nodes_per_wavelength, W,
                                                   cfg.grading_levels, Wx);
        const auto curve_ref =
            discretize_surface(dip, k1, cfg.nodes_per_wavelength, W, cfg.grading_levels, Wx);
        auto opT = std::make_shared<BoundaryIntegralOperator>(curve_true, bk, k1);
        auto opR = std::make_shared<BoundaryIntegralOperator>(curve_ref, bk, k1);

        if (cfg.regime == Regime::Near) {
#pragma omp parallel for schedule(dynamic)
            for (int s = 0; s < cfg.N_s; ++s) {
                const auto solT = solve_impenetrable_pointsource(opT, acq.sources[s]);
                const auto solR = solve_impenetrable_pointsource(opR, acq.sources[s]);
                for (int r = 0; r < cfg.N_r; ++r)
                    out.at(r, s) =
                        solT.correction(acq.receivers[r]).v - solR.correction(acq.receivers[r]).v;
            }
        } else {
#pragma omp parallel for schedule(dynamic)
            for (int r = 0; r < cfg.N_r; ++r) {
                const Vec2 d{-acq.receivers[r].x1, -acq.receivers[r].x2};
                const auto solT = solve_impenetrable_planewave(opT, d);
                const auto solR = solve_impenetrable_planewave(opR, d);
                for (int s = 0; s < cfg.N_s; ++s)
                    out.at(r, s) =
                        solT.correction_far(acq.sources[s]) - solR.correction_far(acq.sources[s]);
            }
        }
    } else {
        const TwoLayerMedium m{WaveNumber(cfg.k1), WaveNumber(cfg.k2)};
        const TransmissionSolver TS(cfg.profile, m, cfg.nodes_per_wavelength);
        const TransmissionSolver TR(dip, m, cfg.nodes_per_wavelength);

        if (cfg.regime == Regime::Near) {
#pragma omp parallel for schedule(dynamic)
            for (int s = 0; s < cfg.N_s; ++s) {
                const auto solT = TS.solve_pointsource(acq.sources[s]);
                const auto solR = TR.solve_pointsource(acq.sources[s]);
                for (int r = 0; r < cfg.N_r; ++r)
                    out.at(r, s) = solT.total(acq.receivers[r]).v - solR.total(acq.receivers[r]).v;
            }
        } else {
#pragma omp parallel for schedule(dynamic)
            for (int r = 0; r < cfg.N_r; ++r) {
                const Vec2 d{-acq.receivers[r].x1, -acq.receivers[r].x2};
                const auto solT = TS.solve_planewave(d);
                const auto solR = TR.solve_planewave(d);
                for (int s = 0; s < cfg.N_s; ++s)
                    out.at(r, s) =
                        solT.correction_far(acq.sources[s]) - solR.correction_far(acq.sources[s]);
            }
        }
    }

    if (cfg.tau > 0.0) out = add_noise(out, cfg.tau, cfg.seed);
    return out;
}

ScatterData add_noise(const ScatterData& data, double tau, std::uint64_t seed) {
    if (tau < 0.0) throw std::invalid_argument("add_noise: tau must be >= 0");
    ScatterData out = data;
    out.tau = tau;
    out.seed = seed;
    if (tau == 0.0) return out;
    const double un = data.frobenius();
    std::vector<Complex> beta(data.m.size());
    double bn2 = 0.0;
    for (std::size_t idx = 0; idx < beta.size(); ++idx) {
        double g1, g2;
        counter_gaussian_pair(seed, idx, g1, g2);
        beta[idx] = Complex(g1, g2);
        bn2 += g1 * g1 + g2 * g2;
    }
    const double bn = std::sqrt(bn2);
    if (bn == 0.0 || un == 0.0) return out;
    const double scale = tau * un / bn;
    for (std::size_t idx = 0; idx < beta.size(); ++idx) out.m[idx] += scale * beta[idx];
    return out;
}

}  // namespace rtm
