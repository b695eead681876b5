#ifndef RTM_FORWARD_HPP
#define RTM_FORWARD_HPP

// Forward scattering solvers.
//
// Impenetrable surfaces: Nystrom boundary integral equations on the
// truncated curve (perturbation plus flat wings), posed for the correction
// to the half-plane image background so the right-hand side vanishes
// identically on the flat parts.  Dirichlet uses a combined double+single
// layer (coupling eta = k), Neumann a single layer.
//
// Penetrable interfaces: the scattered field relative to the flat
// two-layered background is represented by single-layer potentials on the
// closed boundaries of the contrast regions (where the true medium differs
// from the flat background), with the layered kernel v0 outside and the
// free-space kernel of the interior medium inside.  The right-hand sides
// live on those compact curves only, so no truncation is involved.
//
// A small dense Lippmann-Schwinger solver over volume cells of the
// contrast regions provides an independent solution route for checks.

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "rtm/geometry.hpp"
#include "rtm/greens.hpp"

namespace rtm {

// --------------------------------------------------------------------------
// Impenetrable Nystrom operator
// --------------------------------------------------------------------------

class BoundaryIntegralOperator {
  public:
    BoundaryIntegralOperator(const DiscretizedCurve& curve, BoundaryKind kind, WaveNumber k);

    const DiscretizedCurve& curve() const { return curve_; }
    BoundaryKind kind() const { return kind_; }
    double k() const { return k_.value; }

    // boundary data at the nodes -> density; checks the solve residual
    Eigen::VectorXcd solve(const Eigen::VectorXcd& g) const;

    // correction-field potential and far field for a given density
    FieldValue potential(const Eigen::VectorXcd& density, Vec2 x) const;
    Complex far_field(const Eigen::VectorXcd& density, Vec2 xhat) const;

    // trace of the potential at an on-curve point via the jump relation,
    // with the density interpolated between nodes (off-node residual tests)
    Complex boundary_trace(const Eigen::VectorXcd& density, Vec2 x) const;

    double rcond() const { return rcond_; }

  private:
    DiscretizedCurve curve_;
    BoundaryKind kind_;
    WaveNumber k_;
    double eta_;
    Eigen::MatrixXcd mat_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    double rcond_ = 1.0;
};

// Point-source scattering by an impenetrable locally rough surface.
// u = Phi(.,xs) + u_s;  u_s = (v0_kind - Phi)(.,xs) + psi with psi the
// correction solved on the truncated curve.
class ImpenetrableSolution {
  public:
    // scattered field u_s and its far field
    FieldValue scattered(Vec2 x) const;
    Complex scattered_far(Vec2 xhat) const;
    // total field u (point source) or w (plane wave)
    FieldValue total(Vec2 x) const;
    // correction psi = u - v0_kind (equals v_s of the mixed reciprocity)
    FieldValue correction(Vec2 x) const;
    Complex correction_far(Vec2 xhat) const;

    const Eigen::VectorXcd& density() const { return density_; }

  private:
    friend ImpenetrableSolution solve_impenetrable_pointsource(
        const std::shared_ptr<const BoundaryIntegralOperator>&, Vec2);
    friend ImpenetrableSolution solve_impenetrable_planewave(
        const std::shared_ptr<const BoundaryIntegralOperator>&, Vec2);
    std::shared_ptr<const BoundaryIntegralOperator> op_;
    bool plane_wave_ = false;
    Vec2 source_{};  // point source or unit direction
    Eigen::VectorXcd density_;
};

ImpenetrableSolution solve_impenetrable_pointsource(
    const std::shared_ptr<const BoundaryIntegralOperator>& op, Vec2 xs);
ImpenetrableSolution solve_impenetrable_planewave(
    const std::shared_ptr<const BoundaryIntegralOperator>& op, Vec2 d);

// --------------------------------------------------------------------------
// Penetrable transmission solver (single-layer pair on contrast boundaries)
// --------------------------------------------------------------------------

// One closed contrast-region boundary: nodes ordered clockwise so the
// standard node normal points out of the region; interior wavenumber k_int.
struct ContrastCurve {
    DiscretizedCurve curve;
    double k_int;
    double a = 0.0, b = 0.0;  // x1 footprint of the region
    bool above = false;       // region sits above the flat line
};

// Closed boundaries of the regions where the medium of the surface `p`
// differs from the flat two-layer background.
std::vector<ContrastCurve> contrast_curves(const SurfaceProfile& p, const TwoLayerMedium& m,
                                           double nodes_per_wavelength, int grading_levels = 4);

class TransmissionSolver {
  public:
    TransmissionSolver(const SurfaceProfile& p, const TwoLayerMedium& m,
                       double nodes_per_wavelength, double tol = 1e-8);

    const TwoLayerMedium& medium() const { return medium_; }
    const TwoLayerFlatGreen& background() const { return *v0_; }
    std::size_t unknowns() const { return 2 * total_nodes_; }

    struct Solution {
        const TransmissionSolver* owner = nullptr;
        bool plane_wave = false;
        Vec2 source{};
        int source_region = -1;  // -1 exterior, else contrast-curve index
        Eigen::VectorXcd dens_ext, dens_int;

        // scattered correction psi = u - u_inc (u_inc = v0(.,xs) or w0(.,d))
        FieldValue correction(Vec2 x) const;
        Complex correction_far(Vec2 xhat) const;
        // total field u
        FieldValue total(Vec2 x) const;
        Complex total_value(Vec2 x) const { return total(x).v; }
    };

    Solution solve_pointsource(Vec2 xs) const;
    Solution solve_planewave(Vec2 d) const;

    // precomputed exterior kernel rows for a fixed set of evaluation points
    // (all exterior to the contrast regions); eval() then reduces each
    // solution to matrix-vector products
    struct Batch {
        const TransmissionSolver* owner = nullptr;
        std::vector<Vec2> pts;
        bool with_grad = false;
        Eigen::MatrixXcd Ev, Eg1, Eg2;  // pts x total nodes
        std::vector<FieldValue> eval(const Solution& sol) const;
    };
    Batch make_batch(const std::vector<Vec2>& pts, bool with_grad) const;

    double rcond() const { return rcond_; }
    int region_of(Vec2 x) const;  // -1 exterior, else curve index

  private:
    friend struct Solution;
    TwoLayerMedium medium_;
    std::shared_ptr<TwoLayerFlatGreen> v0_;
    SurfaceProfile profile_;
    std::vector<ContrastCurve> curves_;
    std::vector<int> offset_;  // node offset of each curve
    std::size_t total_nodes_ = 0;
    Eigen::MatrixXcd mat_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    double rcond_ = 1.0;

    Eigen::VectorXcd assemble_rhs(bool plane_wave, Vec2 src, int src_region) const;
};

// --------------------------------------------------------------------------
// Volume Lippmann-Schwinger solver (independent route, small regions)
// --------------------------------------------------------------------------

struct VolumeCell {
    Vec2 center;
    double weight;     // cell area (clipped)
    double contrast;   // coefficient multiplying the kernel (+-sigma)
    int ix = 0, iy = 0;
};

// cells of {x : region(x) != 0} with contrast sign from region(): +1 / -1
std::vector<VolumeCell> volume_cells(double x1min, double x1max, double x2min, double x2max,
                                     double h, const std::function<int(Vec2)>& region,
                                     double sigma);

class VolumeOperator {
  public:
    // kernel: v0 of the medium; cells carry the signed contrast
    VolumeOperator(std::vector<VolumeCell> cells, std::shared_ptr<TwoLayerFlatGreen> v0);

    const std::vector<VolumeCell>& cells() const { return cells_; }

    // solve u + sum_j c_j K(.,xi_j) u_j = inc at the cells, inc given at cells
    Eigen::VectorXcd solve(const Eigen::VectorXcd& inc_at_cells) const;

    // Nystrom extension: u(x) = inc(x) - sum_j c_j K(x,xi_j) u_j needs inc(x);
    // the scattered part alone:
    FieldValue scattered(const Eigen::VectorXcd& u, Vec2 x) const;
    Complex scattered_far(const Eigen::VectorXcd& u, Vec2 xhat) const;

  private:
    std::vector<VolumeCell> cells_;
    std::shared_ptr<TwoLayerFlatGreen> v0_;
    Eigen::MatrixXcd mat_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

// --------------------------------------------------------------------------
// Synthetic data
// --------------------------------------------------------------------------

struct ScatterData {
    SurfaceKind kind = SurfaceKind::Dirichlet;
    Regime regime = Regime::Near;
    int N_s = 0, N_r = 0;
    double k1 = 0, k2 = 0, R = 0, R_s = 0, R_r = 0;
    double tau = 0.0;
    std::uint64_t seed = 0;
    std::vector<Complex> m;  // row-major N_r x N_s

    Complex& at(int r, int s) { return m[static_cast<std::size_t>(r) * N_s + s]; }
    Complex at(int r, int s) const { return m[static_cast<std::size_t>(r) * N_s + s]; }
    double frobenius() const;
};

struct ForwardConfig {
    SurfaceProfile profile;
    SurfaceKind kind = SurfaceKind::Dirichlet;
    Regime regime = Regime::Near;
    double k1 = 5.0, k2 = 2.5;
    double R = 20.0;            // dip radius of the reference surface
    double R_s = 30.0, R_r = 40.0;
    int N_s = 64, N_r = 64;
    double nodes_per_wavelength = 10.0;
    double wing_wavelengths = 4.0;   // impenetrable truncation wings
    double wing_extension_factor = 4.0;  // coarse outward extension, x wings
    int grading_levels = 4;
    double tau = 0.0;
    std::uint64_t seed = 1;
};

ScatterData synthesize_data(const ForwardConfig& cfg);

// u_tau = u + tau * (beta/||beta||_F) * ||u||_F, beta counter-seeded complex
// standard normal; exact relative Frobenius perturbation tau.
ScatterData add_noise(const ScatterData& data, double tau, std::uint64_t seed);

}  // namespace rtm

#endif
