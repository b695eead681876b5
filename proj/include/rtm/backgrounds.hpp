#ifndef RTM_BACKGROUNDS_HPP
#define RTM_BACKGROUNDS_HPP

// Background fields of the reference surface with the semicircular dip.
//
// Impenetrable kinds: the domain above the dip surface is split at the dip
// mouth into the upper half-plane H+ and the lens L between the mouth
// segment and the dip arc.  In H+ the field is written with half-plane
// image kernels carried by densities on the segment, which satisfies the
// boundary condition on the flat wings exactly (no truncation); in L it is
// written with free-space layers on segment and arc.  Matching values and
// fluxes across the segment and imposing the boundary condition on the arc
// gives a square system free of hypersingular operators for both kinds.
// Sources may sit anywhere above the surface, including inside the lens.
//
// Penetrable kind: thin wrapper over the transmission solver with the dip
// profile (the contrast region is the lens) against the flat two-layered
// background.

#include <memory>

#include "rtm/forward.hpp"

namespace rtm {

class GammaRBackground {
  public:
    GammaRBackground(BoundaryKind kind, WaveNumber k1, double R,
                     double nodes_per_wavelength = 12.0, int grading_levels = 4);

    BoundaryKind kind() const { return kind_; }
    double R() const { return R_; }
    double k1() const { return k_.value; }
    bool above_surface(Vec2 x) const;
    bool in_lens(Vec2 x) const;

    struct Solution {
        const GammaRBackground* owner = nullptr;
        bool plane_wave = false;
        Vec2 source{};
        Eigen::VectorXcd dens;  // [a(seg); s(seg); q(arc)]

        // total background field G_alpha(x, source) or w_alpha(x, d)
        FieldValue total(Vec2 x) const;
        // value-only fast path (no gradient assembly)
        Complex total_value(Vec2 x) const;

      private:
        FieldValue eval_impl(Vec2 x, bool want_grad) const;

      public:
        // scattered part (total minus the free-space point source / the
        // flat-surface plane-wave background)
        Complex scattered(Vec2 x) const;
    };

    // point source anywhere above the dip surface
    Solution solve(Vec2 xs) const;
    // downward plane wave: total field w_alpha(., d, Gamma_R)
    Solution solve_planewave(Vec2 d) const;

    double rcond() const { return rcond_; }

  private:
    friend struct Solution;
    BoundaryKind kind_;
    WaveNumber k_;
    double R_;
    DiscretizedCurve seg_, arc_;
    int m_ = 0, n_ = 0;
    Eigen::MatrixXcd mat_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    double rcond_ = 1.0;
};

// Two-layered background Green's function of the dip interface and the
// plane-wave fields relative to it.
class PenetrableBackground {
  public:
    PenetrableBackground(const TwoLayerMedium& m, double R, double nodes_per_wavelength = 10.0);

    const TransmissionSolver& solver() const { return *solver_; }
    const TwoLayerMedium& medium() const { return medium_; }

    TransmissionSolver::Solution solve(Vec2 xs) const { return solver_->solve_pointsource(xs); }
    TransmissionSolver::Solution solve_planewave(Vec2 d) const {
        return solver_->solve_planewave(d);
    }
    double k_at(Vec2 x) const { return medium_.k_at(x); }

  private:
    TwoLayerMedium medium_;
    std::unique_ptr<TransmissionSolver> solver_;
};

}  // namespace rtm

#endif
