#ifndef RTM_IMAGING_HPP
#define RTM_IMAGING_HPP

// Reverse-time-migration indicator functions.  The back-propagated field is
// substituted in closed form, so each image value is a double contraction
// of the background fields with the conjugated data matrix:
//
//   near, impenetrable:
//     Ind(z) = -k1^2 Im{ (|Gs|/Ns)(|Gr|/Nr) sum_s sum_r
//                        G(z,x_s) G(z,x_r) conj(V[r,s]) }
//   near, penetrable: weights k(x_r) k(x_s) and full circles;
//   far, impenetrable:
//     Ind(z) = -k1^2 |g1|^2 Im{ g1 (pi/Ns)(pi/Nr) sum_s sum_r
//              w(z,-xhat_r) w(z,-xhat_s) conj(V[r,s]) },  g1 = gamma(k1);
//   far, penetrable: weights k(xhat_r) k(xhat_s) |gamma(xhat_r)|^2
//     gamma(xhat_s) over the full circle of directions.

#include <functional>

#include "rtm/backgrounds.hpp"
#include "rtm/forward.hpp"

namespace rtm {

struct IndicatorConfig {
    SurfaceKind kind = SurfaceKind::Dirichlet;
    Regime regime = Regime::Near;
    ImageGrid grid;                      // geometry in, values out
    double nodes_per_wavelength = 10.0;  // background solver density
    int grading_levels = 4;
    int threads = 0;  // 0: library default
};

// Precomputed background field tables B[z, source] for one acquisition side.
struct BackgroundTable {
    int n_src = 0;
    std::vector<Complex> vals;  // grid-major: vals[iz * n_src + s]
    Complex at(std::size_t iz, int s) const { return vals[iz * n_src + s]; }
};

// Evaluate G(z, x) or w(z, -xhat) for all grid points and sources; fn is the
// per-source field evaluator.
BackgroundTable tabulate_background(const ImageGrid& grid,
                                    const std::vector<Vec2>& sources,
                                    const std::function<std::function<Complex(Vec2)>(Vec2)>& fn);

// Core contraction: Ind(z) = prefactor * Im{ ws wr sum_{s,r} Bs Br conj(V) }
// (optionally with per-source/receiver complex weights folded in).
ImageGrid indicator_contract(const ScatterData& data, const ImageGrid& grid,
                             const BackgroundTable& Bs, const BackgroundTable& Br,
                             const std::vector<Complex>& source_weight,
                             const std::vector<Complex>& receiver_weight, double prefactor,
                             Complex outer_weight);

// Full pipelines (build backgrounds, contract).  The data header fixes the
// acquisition; cfg supplies the grid and solver controls.
ImageGrid indicator_near_impenetrable(const ScatterData& data, const IndicatorConfig& cfg);
ImageGrid indicator_near_penetrable(const ScatterData& data, const IndicatorConfig& cfg);
ImageGrid indicator_far(const ScatterData& data, const IndicatorConfig& cfg);

// dispatch on the data header
ImageGrid compute_indicator(const ScatterData& data, const IndicatorConfig& cfg);

// per-column extremum location (argmax for peak kinds, argmin for nadir)
std::vector<double> column_extremum_height(const ImageGrid& g, bool nadir);

// localization score: fraction of perturbed columns whose extremum height is
// within tol of the true surface
double localization_score(const ImageGrid& g, const SurfaceProfile& truth, bool nadir, double tol);

}  // namespace rtm

#endif
