#ifndef RTM_PANELQUAD_HPP
#define RTM_PANELQUAD_HPP

// Product integration on three-node Gauss panels.
//
// Near a target the kernels are split as  K = P(x,y) ln|x-y| + Q(x,y)  and
// the logarithmic part is integrated exactly against the quadratic Lagrange
// basis of the panel on its straight chord; the smooth part keeps the Gauss
// weights.  A Poisson-kernel variant covers the close evaluation of double
// layer potentials, whose near singularity is not logarithmic.

#include <cmath>
#include <functional>

#include "rtm/geometry.hpp"

namespace rtm {
namespace panelquad {

inline constexpr double g3x[3] = {-0.774596669241483, 0.0, 0.774596669241483};

// integrals of tau^n * ln sqrt((tau-a)^2 + b^2) over [t0, t1]
inline void log_moments(double a, double b, double t0, double t1, double M[3]) {
    const double b2 = b * b;
    auto lg = [&](double u) { return std::log(u * u + b2); };
    auto atn = [&](double u) { return std::abs(b) > 1e-300 ? std::atan(u / std::abs(b)) : 0.0; };
    auto F0 = [&](double u) {
        if (u == 0.0 && b2 == 0.0) return 0.0;
        const double l = (u == 0.0 && b2 == 0.0) ? 0.0 : lg(u);
        return u * l - 2.0 * u + 2.0 * std::abs(b) * atn(u);
    };
    auto F1 = [&](double u) {
        if (u == 0.0 && b2 == 0.0) return 0.0;
        return 0.5 * (u * u + b2) * lg(u) - 0.5 * u * u;
    };
    auto F2 = [&](double u) {
        if (u == 0.0 && b2 == 0.0) return 0.0;
        return (u * u * u / 3.0) * lg(u) -
               (2.0 / 3.0) * (u * u * u / 3.0 - b2 * u + b2 * std::abs(b) * atn(u));
    };
    const double c0 = t0 - a, c1 = t1 - a;
    const double I0 = F0(c1) - F0(c0);          // int ln(u^2+b^2) du
    const double I1 = F1(c1) - F1(c0);          // int u ln(...) du
    const double I2 = F2(c1) - F2(c0);          // int u^2 ln(...) du
    M[0] = 0.5 * I0;
    M[1] = 0.5 * (I1 + a * I0);
    M[2] = 0.5 * (I2 + 2.0 * a * I1 + a * a * I0);
}

// integrals of tau^n * bs/((tau-a)^2 + bs^2) over [t0, t1]  (Poisson kernel,
// signed offset bs)
inline void poisson_moments(double a, double bs, double t0, double t1, double N[3]) {
    const double b2 = bs * bs;
    const double c0 = t0 - a, c1 = t1 - a;
    if (std::abs(bs) < 1e-300) {
        N[0] = N[1] = N[2] = 0.0;
        return;
    }
    auto atn = [&](double u) { return std::atan(u / bs); };
    const double A0 = atn(c1) - atn(c0);                       // int bs/(u^2+b^2)
    const double A1 = 0.5 * bs * std::log((c1 * c1 + b2) / (c0 * c0 + b2));  // int u bs/(...)
    const double A2 = bs * (c1 - c0) - b2 * A0;                // int u^2 bs/(...)
    N[0] = A0;
    N[1] = A1 + a * A0;
    N[2] = A2 + 2.0 * a * A1 + a * a * A0;
}

// weights of the quadratic Lagrange basis of the panel against precomputed
// moments M[0..2] (tau measured from the panel center along the chord)
inline void lagrange_weights(double len, const double M[3], double W[3]) {
    const double t = 0.774596669241483 * 0.5 * len;
    W[0] = -M[1] / (2.0 * t) + M[2] / (2.0 * t * t);
    W[1] = M[0] - M[2] / (t * t);
    W[2] = M[1] / (2.0 * t) + M[2] / (2.0 * t * t);
}

struct RowKernel {
    // full kernel at (x, node); must be callable for r > 0
    std::function<Complex(Vec2, const CurveNode&)> full;
    // coefficient of ln|x-y| near the diagonal (callable for r >= 0)
    std::function<Complex(Vec2, const CurveNode&)> logP;
    // limit of full - logP*ln r as the target reaches the node
    std::function<Complex(const CurveNode&)> self_q;
};

// Accumulate one collocation/evaluation row: out[j] += coefficient of the
// density at node j.  self_node >= 0 marks the collocation node.
inline void accumulate_row(const DiscretizedCurve& c, Vec2 x, int self_node, const RowKernel& K,
                           Complex* out, double near_factor = 2.5) {
    for (const auto& pan : c.panels) {
        const double d = dist(x, pan.center);
        const bool self_here =
            self_node >= 0 && self_node >= pan.first_node && self_node < pan.first_node + 3;
        if (!self_here && d > near_factor * pan.len) {
            for (int q = 0; q < 3; ++q) {
                const CurveNode& nd = c.nodes[pan.first_node + q];
                out[pan.first_node + q] += nd.weight * K.full(x, nd);
            }
            continue;
        }
        const Vec2 p = x - pan.center;
        const double a = dot(p, pan.tangent);
        const double b = std::sqrt(std::max(0.0, dot(p, p) - a * a));
        double M[3], W[3];
        log_moments(a, b, -0.5 * pan.len, 0.5 * pan.len, M);
        lagrange_weights(pan.len, M, W);
        for (int q = 0; q < 3; ++q) {
            const int idx = pan.first_node + q;
            const CurveNode& nd = c.nodes[idx];
            const Complex P = K.logP(x, nd);
            Complex Q;
            if (self_node == idx) {
                Q = K.self_q(nd);
            } else {
                const double r = dist(x, nd.pos);
                Q = K.full(x, nd) - P * std::log(r);
            }
            out[idx] += nd.weight * Q + P * W[q];
        }
    }
}

}  // namespace panelquad
}  // namespace rtm

#endif
