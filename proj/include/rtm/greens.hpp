#ifndef RTM_GREENS_HPP
#define RTM_GREENS_HPP

// Background wave fields over the flat interface: half-plane image Green's
// functions, reflected plane waves for sound-soft/sound-hard planes, the
// Fresnel plane-wave fields of a two-fluid interface, and the two-layered
// background Green's function v0 evaluated from its angular-spectrum
// representation.

#include "rtm/sommerfeld.hpp"
#include "rtm/types.hpp"

namespace rtm {

enum class BoundaryKind { Dirichlet, Neumann };
enum class SurfaceKind { Dirichlet, Neumann, Penetrable };

inline char surface_kind_tag(SurfaceKind k) {
    return k == SurfaceKind::Dirichlet ? 'D' : (k == SurfaceKind::Neumann ? 'N' : 'P');
}

// gamma(k) = e^{i pi/4} / sqrt(8 pi k): far-field normalization of the
// 2-D outgoing fundamental solution.
Complex farfield_gamma(double k);

// Phi(x,y) -/+ Phi(x,y') with y' the image of y across x2 = 0.
FieldValue halfplane_green(BoundaryKind kind, WaveNumber k, Vec2 x, Vec2 y);

// w_{0,D/N}(x,d) = e^{ik x.d} -/+ e^{ik x.d^r}, d pointing downward.
FieldValue planewave_impenetrable(BoundaryKind kind, WaveNumber k1, Vec2 x, Vec2 d);

struct TwoLayerMedium {
    WaveNumber k1;  // upper
    WaveNumber k2;  // lower
    double gammaR_radius = 0.0;  // 0: flat interface Gamma_0
    TwoLayerMedium(WaveNumber a, WaveNumber b, double R = 0.0) : k1(a), k2(b), gammaR_radius(R) {}
    double sigma() const { return k1.value * k1.value - k2.value * k2.value; }
    double k_at(Vec2 x) const;  // piecewise wavenumber (relative to the interface)
};

struct FresnelCoefficients {
    Complex R;
    Complex T;       // T = R + 1
    CVec2 dt;        // transmitted direction (second component complex past cutoff)
    double theta_c;  // critical incidence angle (0 if none)
};

// theta in (0,2pi)\{pi}: direction d = (cos theta, sin theta); downward
// incidence for theta in (pi,2pi), upward for (0,pi).  Errors out at exact
// critical or grazing incidence.
FresnelCoefficients fresnel(WaveNumber k1, WaveNumber k2, double theta);

// Total plane-wave field of the flat two-fluid interface (all four
// incidence/evaluation branches).
FieldValue planewave_penetrable(const TwoLayerMedium& m, Vec2 x, Vec2 d);

// value + both gradients + the mixed second-derivative matrix d^2/dx_i dy_j
struct KernelSecond {
    Complex v{};
    CVec2 gx, gy;
    Complex gxy[2][2] = {};
};

// d^2 Phi / dx_i dy_j
KernelSecond phi_second(WaveNumber k, Vec2 x, Vec2 y);

// Two-layered background Green's function v0 for the flat interface.
class TwoLayerFlatGreen {
  public:
    TwoLayerFlatGreen(WaveNumber k1, WaveNumber k2, double tol = 1e-9);

    const TwoLayerSpectral& spectral() const { return sp_; }
    double k1() const { return sp_.k1(); }
    double k2() const { return sp_.k2(); }

    // v0 and gradient in x
    FieldValue value(Vec2 x, Vec2 y) const;
    // v0 with both gradients and mixed second derivatives (includes the
    // direct free-space part)
    KernelSecond full(Vec2 x, Vec2 y) const;
    // the spectral (reflected/transmitted) part alone, same layout
    KernelSecond spectral_part(Vec2 x, Vec2 y, int order) const;
    // oracle: same quantities on a 100x tighter quadrature
    FieldValue value_refined(Vec2 x, Vec2 y) const;

    // far-field kernel of v0: v0^inf(xhat, y) = gamma(xhat) w0(y, -xhat),
    // with the gradient in y
    FieldValue far_kernel(Vec2 xhat, Vec2 y) const;

  private:
    TwoLayerSpectral sp_;
};

}  // namespace rtm

#endif
