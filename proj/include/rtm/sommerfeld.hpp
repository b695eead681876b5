#ifndef RTM_SOMMERFELD_HPP
#define RTM_SOMMERFELD_HPP

// Spectral (angular-spectrum) integrals behind the two-layered background
// Green's function for the flat interface x2 = 0:
//
//   reflected, both points upper:   (1/2pi) Int (i/b1) r  e^{i b1 s} cos(xi d) dxi
//   reflected, both points lower:  -(1/2pi) Int (i/b2) r  e^{i b2 s} cos(xi d) dxi
//   transmitted, opposite sides:    (1/2pi) Int 2i/(b1+b2) e^{i b1 a + i b2 b} cos(xi d) dxi
//
// with b_j = sqrt(k_j^2 - xi^2) (Im >= 0) and r = (b1-b2)/(b1+b2).
// d = |x1-y1|, s = sum of heights over the interface, a/b = upper height and
// lower depth.  The path is split at the branch points with substitutions
// that remove the inverse square-root endpoint singularities; the evanescent
// tail is finished analytically with complex exponential integrals.
//
// Each evaluation also accumulates the derivative fields needed for kernel
// gradients and for the second-derivative (hypersingular-difference)
// kernels of the transmission integral equations.

#include "rtm/types.hpp"

namespace rtm {

struct SpectralFields {
    Complex f{};     // value
    Complex fd{};    // d/dd
    Complex fh1{};   // d/dh1   (s for reflected; upper height a for transmitted)
    Complex fh2{};   // d/dh2   (lower depth b, transmitted only)
    Complex fdd{};
    Complex fdh1{};
    Complex fdh2{};
    Complex fh1h1{};
    Complex fh1h2{};
};

// Complex exponential integral E1 (series + continued fraction), |arg z| < pi.
Complex expint_e1(Complex z);

class TwoLayerSpectral {
  public:
    TwoLayerSpectral(double k1, double k2, double tol = 1e-10);

    double k1() const { return k1_; }
    double k2() const { return k2_; }

    // order: 0 value, 1 +first derivatives, 2 +second derivatives
    SpectralFields reflected_upper(double d, double s, int order) const;
    SpectralFields reflected_lower(double d, double s, int order) const;
    SpectralFields transmitted(double d, double a, double b, int order) const;

    // same integrals with the quadrature tolerance and truncation pushed
    // harder (refined-rule oracle used by tests)
    SpectralFields reflected_upper_refined(double d, double s, int order) const;
    SpectralFields transmitted_refined(double d, double a, double b, int order) const;

  private:
    enum class Family { ReflUpper, ReflLower, Trans };
    SpectralFields integrate(Family fam, double d, double h1, double h2, int order,
                             double tol, double refine) const;
    double k1_, k2_, kmin_, kmax_, sigma_, tol_;
};

}  // namespace rtm

#endif
