#include "rtm/backgrounds.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rtm/panelquad.hpp"
#include "rtm/specfun.hpp"

namespace rtm {

namespace {

constexpr double euler_gamma = 0.57721566490153286060651209008240243;

panelquad::RowKernel sl_kernel(double k) {
    panelquad::RowKernel K;
    K.full = [k](Vec2 x, const CurveNode& nd) {
        return 0.25 * iu * hankel1(0, k * dist(x, nd.pos));
    };
    K.logP = [k](Vec2 x, const CurveNode& nd) {
        return Complex(-bessel_j(0, k * dist(x, nd.pos)) / (2.0 * pi), 0.0);
    };
    K.self_q = [k](const CurveNode&) {
        return Complex(-(std::log(0.5 * k) + euler_gamma) / (2.0 * pi), 0.25);
    };
    return K;
}

panelquad::RowKernel dl_kernel(double k) {
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

panelquad::RowKernel adj_kernel(double k, Vec2 nux) {
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

}  // namespace

GammaRBackground::GammaRBackground(BoundaryKind kind, WaveNumber k1, double R,
                                   double nodes_per_wavelength, int grading_levels)
    : kind_(kind), k_(k1), R_(R) {
    if (!(R > 0.0)) throw std::invalid_argument("GammaRBackground: R must be > 0");
    const double h = k1.wavelength() / nodes_per_wavelength;
    seg_ = discretize_pieces({CurvePiece::line({-R, 0.0}, {R, 0.0}, true, true)}, h, grading_levels);
    arc_ = discretize_pieces({CurvePiece::arc({0.0, 0.0}, R, pi, 2.0 * pi, true, true)}, h,
                             grading_levels);
    m_ = static_cast<int>(seg_.size());
    n_ = static_cast<int>(arc_.size());
    const int N = 2 * m_ + n_;
    mat_.setZero(N, N);
    const double kk = k_.value;

    // unknowns [a(seg); s(seg); q(arc)]; rows: value match on the segment,
    // flux match on the segment, boundary condition on the arc.
    // The doubled image double layer on the flat segment vanishes between
    // distinct segment points, so its only on-segment trace is the jump.
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m_; ++i) {
        const Vec2 x = seg_.nodes[i].pos;
        const Vec2 nu = seg_.nodes[i].normal;
        std::vector<Complex> rowS(m_, Complex(0.0)), rowQ(n_, Complex(0.0));
        panelquad::accumulate_row(seg_, x, i, sl_kernel(kk), rowS.data());
        panelquad::accumulate_row(arc_, x, -1, sl_kernel(kk), rowQ.data());
        std::vector<Complex> rowQA(n_, Complex(0.0));
        panelquad::accumulate_row(arc_, x, -1, adj_kernel(kk, nu), rowQA.data());
        if (kind_ == BoundaryKind::Dirichlet) {
            mat_(i, i) = 2.0;
            for (int j = 0; j < m_; ++j) mat_(i, m_ + j) = -rowS[j];
            for (int j = 0; j < n_; ++j) mat_(i, 2 * m_ + j) = -rowQ[j];
        } else {
            for (int j = 0; j < m_; ++j) mat_(i, m_ + j) = rowS[j];
            for (int j = 0; j < n_; ++j) mat_(i, 2 * m_ + j) = rowQ[j];
            mat_(m_ + i, i) = 2.0;
        }
        mat_(m_ + i, m_ + i) += 0.5;
        for (int j = 0; j < n_; ++j) mat_(m_ + i, 2 * m_ + j) = rowQA[j];
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_; ++i) {
        const Vec2 x = arc_.nodes[i].pos;
        const Vec2 nu = arc_.nodes[i].normal;
        const int row = 2 * m_ + i;
        if (kind_ == BoundaryKind::Dirichlet) {
            std::vector<Complex> rowA(m_, Complex(0.0)), rowS(m_, Complex(0.0)),
                rowQ(n_, Complex(0.0));
            panelquad::accumulate_row(seg_, x, -1, dl_kernel(kk), rowA.data());
            panelquad::accumulate_row(seg_, x, -1, sl_kernel(kk), rowS.data());
            panelquad::accumulate_row(arc_, x, i, sl_kernel(kk), rowQ.data());
            for (int j = 0; j < m_; ++j) {
                mat_(row, j) = 2.0 * rowA[j];
                mat_(row, m_ + j) = rowS[j];
            }
            for (int j = 0; j < n_; ++j) mat_(row, 2 * m_ + j) = rowQ[j];
        } else {
            std::vector<Complex> rowA(m_, Complex(0.0)), rowQ(n_, Complex(0.0));
            panelquad::accumulate_row(seg_, x, -1, adj_kernel(kk, nu), rowA.data());
            panelquad::accumulate_row(arc_, x, i, adj_kernel(kk, nu), rowQ.data());
            for (int j = 0; j < m_; ++j) {
                mat_(row, j) = 2.0 * rowA[j];
                mat_(row, m_ + j) = rowA[j];
            }
            for (int j = 0; j < n_; ++j)
                mat_(row, 2 * m_ + j) = rowQ[j] + (i == j ? Complex(-0.5) : Complex(0.0));
        }
    }
    lu_.compute(mat_);
    rcond_ = lu_.rcond();
    if (!(rcond_ > 1e-13)) throw std::runtime_error("GammaRBackground: system ill-conditioned");
}

bool GammaRBackground::in_lens(Vec2 x) const {
    return x.x2 < 0.0 && x.x1 * x.x1 + x.x2 * x.x2 < R_ * R_;
}

bool GammaRBackground::above_surface(Vec2 x) const { return x.x2 >= 0.0 || in_lens(x); }

GammaRBackground::Solution GammaRBackground::solve(Vec2 xs) const {
    if (!above_surface(xs))
        throw std::invalid_argument("GammaRBackground::solve: source below the surface");
    Solution sol;
    sol.owner = this;
    sol.plane_wave = false;
    sol.source = xs;
    const bool src_lens = in_lens(xs);
    const int N = 2 * m_ + n_;
    Eigen::VectorXcd rhs(N);
    for (int i = 0; i < m_; ++i) {
        const Vec2 x = seg_.nodes[i].pos;
        const Vec2 nu = seg_.nodes[i].normal;
        FieldValue ip{}, il{};
        if (!src_lens) ip = halfplane_green(kind_, k_, x, xs);
        if (src_lens) il = phi_field(k_, x, xs);
        if (kind_ == BoundaryKind::Dirichlet)
            rhs[i] = il.v - ip.v;
        else
            rhs[i] = ip.v - il.v;
        rhs[m_ + i] = dot(ip.grad, nu) - dot(il.grad, nu);
    }
    for (int i = 0; i < n_; ++i) {
        FieldValue il{};
        if (src_lens) il = phi_field(k_, arc_.nodes[i].pos, xs);
        rhs[2 * m_ + i] =
            (kind_ == BoundaryKind::Dirichlet) ? -il.v : -dot(il.grad, arc_.nodes[i].normal);
    }
    sol.dens = lu_.solve(rhs);
    const double rn = rhs.norm();
    if (rn > 0 && !((mat_ * sol.dens - rhs).norm() / rn <= 1e-9))
        throw std::runtime_error("GammaRBackground: solve residual too large");
    return sol;
}

GammaRBackground::Solution GammaRBackground::solve_planewave(Vec2 d) const {
    if (!(d.x2 < 0.0)) throw std::invalid_argument("GammaRBackground: direction must be downward");
    Solution sol;
    sol.owner = this;
    sol.plane_wave = true;
    sol.source = d;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(2 * m_ + n_);
    // inc+ = inc_L = w0_alpha: only the arc boundary condition drives
    for (int i = 0; i < n_; ++i) {
        const FieldValue w0 = planewave_impenetrable(kind_, k_, arc_.nodes[i].pos, d);
        rhs[2 * m_ + i] =
            (kind_ == BoundaryKind::Dirichlet) ? -w0.v : -dot(w0.grad, arc_.nodes[i].normal);
    }
    sol.dens = lu_.solve(rhs);
    return sol;
}

FieldValue GammaRBackground::Solution::total(Vec2 x) const { return eval_impl(x, true); }

Complex GammaRBackground::Solution::total_value(Vec2 x) const { return eval_impl(x, false).v; }

FieldValue GammaRBackground::Solution::eval_impl(Vec2 x, bool want_grad) const {
    const GammaRBackground& S = *owner;
    const double kk = S.k_.value;
    const bool lens = S.in_lens(x);
    const bool upper = x.x2 >= 0.0;
    if (!upper && !lens)
        throw std::invalid_argument("GammaRBackground: evaluation below the surface");

    FieldValue out;
    if (plane_wave) {
        out = planewave_impenetrable(S.kind_, S.k_, x, source);
    } else {
        const bool src_lens = S.in_lens(source);
        if (!src_lens && upper) out = halfplane_green(S.kind_, S.k_, x, source);
        if (src_lens && lens) out = phi_field(S.k_, x, source);
    }

    // shared doubled layer on the segment: double layer for the sound-soft
    // kind (with the Laplace part integrated exactly near the segment),
    // single layer for the sound-hard kind
    if (S.kind_ == BoundaryKind::Dirichlet) {
        for (const auto& pan : S.seg_.panels) {
            const double dpan = dist(x, pan.center);
            if (dpan > 2.5 * pan.len) {
                for (int q = 0; q < 3; ++q) {
                    const CurveNode& nd = S.seg_.nodes[pan.first_node + q];
                    const Complex aj = dens[pan.first_node + q];
                    const double r = dist(x, nd.pos);
                    const Vec2 e{(x.x1 - nd.pos.x1) / r, (x.x2 - nd.pos.x2) / r};
                    out.v += aj * nd.weight * 0.5 * iu * kk * hankel1(1, kk * r) * dot(e, nd.normal);
                    if (want_grad) {
                        const KernelSecond ps = phi_second(S.k_, x, nd.pos);
                        out.grad.x1 += aj * nd.weight * 2.0 *
                                       (ps.gxy[0][0] * nd.normal.x1 + ps.gxy[0][1] * nd.normal.x2);
                        out.grad.x2 += aj * nd.weight * 2.0 *
                                       (ps.gxy[1][0] * nd.normal.x1 + ps.gxy[1][1] * nd.normal.x2);
                    }
                }
                continue;
            }
            // close evaluation: exact Poisson moments for the Laplace part
            const Vec2 nup{-pan.tangent.x2, pan.tangent.x1};
            const Vec2 pp = x - pan.center;
            const double a = dot(pp, pan.tangent);
            const double bs = dot(pp, nup);
            double Nm[3], PW[3];
            panelquad::poisson_moments(a, bs, -0.5 * pan.len, 0.5 * pan.len, Nm);
            panelquad::lagrange_weights(pan.len, Nm, PW);
            for (int q = 0; q < 3; ++q) {
                const CurveNode& nd = S.seg_.nodes[pan.first_node + q];
                const Complex aj = dens[pan.first_node + q];
                const double r = dist(x, nd.pos);
                Complex smooth = 0.0;
                if (r > 1e-13) {
                    const Vec2 e{(x.x1 - nd.pos.x1) / r, (x.x2 - nd.pos.x2) / r};
                    const Complex dlk = 0.5 * iu * kk * hankel1(1, kk * r) * dot(e, nd.normal);
                    const Complex dl0 = (1.0 / pi) * dot(e, nd.normal) / r;
                    smooth = nd.weight * (dlk - dl0);
                }
                out.v += aj * (smooth + (1.0 / pi) * PW[q]);
            }
        }
    } else {
        const int nn = S.m_;
        std::vector<Complex> row(nn, Complex(0.0));
        panelquad::accumulate_row(S.seg_, x, -1, sl_kernel(kk), row.data());
        for (int j = 0; j < nn; ++j) out.v += 2.0 * row[j] * dens[j];
        if (want_grad)
            for (int j = 0; j < nn; ++j) {
                const CurveNode& nd = S.seg_.nodes[j];
                const CVec2 g = phi_grad(S.k_, x, nd.pos);
                out.grad.x1 += 2.0 * dens[j] * nd.weight * g.x1;
                out.grad.x2 += 2.0 * dens[j] * nd.weight * g.x2;
            }
    }

    if (lens) {
        std::vector<Complex> rowS(S.m_, Complex(0.0)), rowQ(S.n_, Complex(0.0));
        panelquad::accumulate_row(S.seg_, x, -1, sl_kernel(kk), rowS.data());
        panelquad::accumulate_row(S.arc_, x, -1, sl_kernel(kk), rowQ.data());
        for (int j = 0; j < S.m_; ++j) out.v += rowS[j] * dens[S.m_ + j];
        for (int j = 0; j < S.n_; ++j) out.v += rowQ[j] * dens[2 * S.m_ + j];
        if (want_grad) {
            for (int j = 0; j < S.m_; ++j) {
                const CurveNode& nd = S.seg_.nodes[j];
                const CVec2 g = phi_grad(S.k_, x, nd.pos);
                out.grad.x1 += dens[S.m_ + j] * nd.weight * g.x1;
                out.grad.x2 += dens[S.m_ + j] * nd.weight * g.x2;
            }
            for (int j = 0; j < S.n_; ++j) {
                const CurveNode& nd = S.arc_.nodes[j];
                const CVec2 g = phi_grad(S.k_, x, nd.pos);
                out.grad.x1 += dens[2 * S.m_ + j] * nd.weight * g.x1;
                out.grad.x2 += dens[2 * S.m_ + j] * nd.weight * g.x2;
            }
        }
    }
    return out;
}

Complex GammaRBackground::Solution::scattered(Vec2 x) const {
    const FieldValue t = total(x);
    if (plane_wave)
        return t.v - planewave_impenetrable(owner->kind_, owner->k_, x, source).v;
    return t.v - phi(owner->k_, x, source);
}

PenetrableBackground::PenetrableBackground(const TwoLayerMedium& m, double R,
                                           double nodes_per_wavelength)
    : medium_{m.k1, m.k2, R},
      solver_(std::make_unique<TransmissionSolver>(SurfaceProfile::gammaR_dip(R),
                                                   TwoLayerMedium{m.k1, m.k2},
                                                   nodes_per_wavelength)) {}

}  // namespace rtm
