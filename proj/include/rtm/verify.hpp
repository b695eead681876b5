#ifndef RTM_VERIFY_HPP
#define RTM_VERIFY_HPP

// Numerical verification of the structural identities behind the imaging
// functionals: the modified Helmholtz-Kirchhoff identity on measurement
// circles, the decay of its remainder with the measurement radius,
// reciprocity of the background Green's functions, and the mixed
// reciprocity between point-source far fields and plane-wave near fields.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rtm/geometry.hpp"
#include "rtm/greens.hpp"

namespace rtm {

struct IdentityReport {
    std::string name;
    double max_residual = 0.0;
    int samples = 0;
    double threshold = 0.0;
    bool pass = false;
    std::string params;
};

std::string format_report_table(const std::vector<IdentityReport>& reports);
// one line per identity: name residual threshold pass
std::string format_report_machine(const std::vector<IdentityReport>& reports);

// per-source field evaluator factory (a solve that can then be evaluated
// anywhere above/off the reference surface)
using FieldSolver = std::function<std::function<FieldValue(Vec2)>(Vec2)>;

// int_{Gamma_p} ( conj(G(.,x)) dG(.,z)/dnu - dconj(G(.,x))/dnu G(.,z) ) ds
// against 2i Im G(x,z), trapezoid with M points on the circle of radius rho
// (upper semicircle unless full_circle).
IdentityReport check_helmholtz_kirchhoff(const std::string& name, const FieldSolver& solver,
                                         double rho, bool full_circle,
                                         const std::vector<std::pair<Vec2, Vec2>>& pairs, int M,
                                         double threshold, double R_guard = 0.0);

// zeta(x,z) = int_{Gamma_s} kappa(xi) conj(G(x,xi)) G(xi,z) ds - Im G(x,z)
// measured over a grid of pairs for each radius; reports the fitted log-log
// slope of max|zeta| (params) and whether the values decay monotonically.
struct DecayReport {
    IdentityReport report;
    std::vector<double> radii;
    std::vector<double> zeta_max;
    double slope = 0.0;
    bool monotone = false;
};
DecayReport check_remainder_decay(const std::string& name, const FieldSolver& solver,
                                  const std::function<double(Vec2)>& kappa_at,
                                  const std::vector<double>& radii, bool full_circle,
                                  const std::vector<Vec2>& xs, const std::vector<Vec2>& zs,
                                  int M_per_wavelength, double slope_lo, double slope_hi);

IdentityReport check_reciprocity(const std::string& name,
                                 const std::function<Complex(Vec2, Vec2)>& G,
                                 const std::vector<std::pair<Vec2, Vec2>>& pairs,
                                 double threshold);

// v_inf(xhat, xs) vs gamma(xhat) w_s(xs, -xhat): both sides supplied as
// callables over (direction, source) samples.
IdentityReport check_mixed_reciprocity(const std::string& name,
                                       const std::function<Complex(Vec2, Vec2)>& v_far,
                                       const std::function<Complex(Vec2, Vec2)>& gamma_ws,
                                       const std::vector<Vec2>& directions,
                                       const std::vector<Vec2>& sources, double threshold);

}  // namespace rtm

#endif
