#ifndef RTM_SPECFUN_HPP
#define RTM_SPECFUN_HPP

// Cylinder functions of orders 0 and 1 and the free-space Helmholtz
// fundamental solution Phi_k(x,y) = (i/4) H0^(1)(k|x-y|).
//
// J is computed by Miller's backward recurrence for x <= 14 and by the
// Hankel asymptotic expansion beyond; Y uses the ascending series with
// logarithm below the split and the same asymptotic expansion above.

#include "rtm/types.hpp"

namespace rtm {

// J_order(x), order in {0,1}, x >= 0.
double bessel_j(int order, double x);

// Y_order(x), order in {0,1}, x > 0.
double bessel_y(int order, double x);

// H^(1)_order(x) = J_order(x) + i Y_order(x), x > 0.
Complex hankel1(int order, double x);

// Fundamental solution Phi_k(x,y) and its gradient in x.
Complex phi(WaveNumber k, Vec2 x, Vec2 y);
CVec2 phi_grad(WaveNumber k, Vec2 x, Vec2 y);
FieldValue phi_field(WaveNumber k, Vec2 x, Vec2 y);

}  // namespace rtm

#endif
