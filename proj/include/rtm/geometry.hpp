#ifndef RTM_GEOMETRY_HPP
#define RTM_GEOMETRY_HPP

// Surface profiles (local perturbations of the flat line x2 = 0), the
// reference surface with a semicircular dip of radius R, curve
// discretization with flat truncation wings, source/receiver layouts on
// circles, and the sampling grid for the indicator images.
//
// All builtin profiles are stored already shifted so that the flat level
// is exactly x2 = 0.

#include <string>
#include <vector>

#include "rtm/types.hpp"

namespace rtm {

enum class ProfileKind { Flat, F1, F2, F3, GammaRDip, Tabulated };

struct SurfaceProfile {
    ProfileKind kind = ProfileKind::Flat;
    double support_halfwidth = 0.0;  // A: f(x1) = 0 for |x1| >= A
    double base_shift = -0.5;        // applied to the builtin bump profiles
    double dip_radius = 0.0;         // gammaR-dip only
    std::vector<double> table_x, table_f;  // tabulated only

    static SurfaceProfile flat(double halfwidth = 1.0);
    static SurfaceProfile f1();
    static SurfaceProfile f2();
    static SurfaceProfile f3();
    static SurfaceProfile gammaR_dip(double R);
    static SurfaceProfile tabulated(const std::string& path);
    static SurfaceProfile tabulated(std::vector<double> x, std::vector<double> f);
};

// Height after base shift; error for a tabulated profile queried outside
// its table.
double profile_eval(const SurfaceProfile& p, double x1);
// One-sided-safe derivative; jump profiles return the derivative of the
// horizontal piece (0) away from the jump abscissae.
double profile_deriv(const SurfaceProfile& p, double x1);
// Abscissae of jump discontinuities (empty for continuous profiles).
std::vector<double> profile_jumps(const SurfaceProfile& p);

// Special surface Gamma_R: flat for |x1| >= R, lower semicircle of radius
// R below the origin for |x1| <= R.
struct SpecialSurfaceGammaR {
    double R;
    explicit SpecialSurfaceGammaR(double radius);
    double height(double x1) const;
    // true if x lies strictly above the surface
    bool above(Vec2 x, double tol = 0.0) const;
};

// --------------------------------------------------------------------------
// Discretized curve (Nystrom nodes)
// --------------------------------------------------------------------------

struct CurveNode {
    Vec2 pos;
    Vec2 tangent;      // unit, in the direction of increasing parameter
    Vec2 normal;       // unit, rotated +90 deg from tangent (into Omega_1)
    double weight;     // quadrature weight (Gauss weight times interval arclength)
    double curvature;  // signed curvature of the piece at the node
    int piece = 0;     // smooth piece index
    int panel = 0;     // owning panel index
};

// One quadrature panel carrying three Gauss-Legendre nodes.
struct CurvePanel {
    int first_node = 0;  // nodes first_node..first_node+2
    Vec2 center;
    Vec2 tangent;  // unit tangent at the panel center
    double len = 0.0;  // panel arclength
    int piece = 0;
};

// One smooth parametrized piece, t in [0,1].  Graph pieces reference a
// profile that must outlive the discretization call; xa > xb reverses the
// traversal direction.
struct CurvePiece {
    enum class Type { Line, Arc, Graph } type = Type::Line;
    Vec2 a, b;                             // line endpoints
    Vec2 center;                           // arc
    double radius = 0, ang0 = 0, ang1 = 0;
    const SurfaceProfile* prof = nullptr;  // graph
    double xa = 0, xb = 0;
    bool grade_start = false, grade_end = false;

    static CurvePiece line(Vec2 a, Vec2 b, bool gs = false, bool ge = false);
    static CurvePiece arc(Vec2 center, double radius, double ang0, double ang1,
                          bool gs = false, bool ge = false);
    static CurvePiece graph(const SurfaceProfile& p, double xa, double xb,
                            bool gs = false, bool ge = false);

    Vec2 pos(double t) const;
    Vec2 vel(double t) const;  // dgamma/dt, unnormalized
    double speed(double t) const { return norm(vel(t)); }
    double curvature(double t) const;
    double arclength(double t0, double t1) const;
};

struct DiscretizedCurve {
    std::vector<CurveNode> nodes;
    std::vector<CurvePanel> panels;
    double wing_halfwidth = 0.0;
    double nodes_per_wavelength = 0.0;
    double total_arclength = 0.0;

    std::size_t size() const { return nodes.size(); }
};

// Midpoint-in-parameter nodes with exact interval arclength weights and
// dyadic grading toward flagged piece ends.
DiscretizedCurve discretize_pieces(const std::vector<CurvePiece>& pieces, double h_target,
                                   int grading_levels);


// Nodes cover [-A-W, A+W]; spacing <= wavelength/nodes_per_wavelength;
// jump points and corners carry geometric grading (dyadic levels toward
// each corner).
DiscretizedCurve discretize_surface(const SurfaceProfile& p, WaveNumber k,
                                    double nodes_per_wavelength, double W,
                                    int grading_levels = 3, double wing_extension = 0.0);

// --------------------------------------------------------------------------
// Acquisition geometry
// --------------------------------------------------------------------------

enum class Regime { Near, Far };
enum class Aperture { UpperSemicircle, FullCircle };

struct AcquisitionGeometry {
    Regime regime = Regime::Near;
    Aperture aperture = Aperture::UpperSemicircle;
    double R_s = 0.0;  // source radius (near regime)
    double R_r = 0.0;  // receiver radius (near regime)
    int N_s = 0;
    int N_r = 0;
};

struct AcquisitionPoints {
    std::vector<double> source_angles;
    std::vector<double> receiver_angles;
    std::vector<Vec2> sources;    // points (near) or unit directions (far)
    std::vector<Vec2> receivers;  // points (near) or unit directions (far)
};

// Uniform angular layouts: upper semicircle with half-step inset, full
// circle starting at angle 0.  When gamma_R_radius > 0 the layout is
// validated against the background surface (R < R_s <= R_r) and
// full-circle angles whose point would land on Gamma_R are rotated by a
// tiny inset so that no source sits on the interface.
AcquisitionPoints acquisition_points(const AcquisitionGeometry& g, double gamma_R_radius = 0.0);

// --------------------------------------------------------------------------
// Image grid
// --------------------------------------------------------------------------

struct ImageGrid {
    double x1min = 0, x1max = 0, x2min = 0, x2max = 0;
    int n1 = 0, n2 = 0;
    std::vector<double> values;  // x1-major: values[i1*n2 + i2]
    // set by normalize_image
    double raw_min = 0.0, raw_max = 0.0;
    bool normalized = false;

    ImageGrid() = default;
    ImageGrid(double a1, double b1, double a2, double b2, int m1, int m2);
    double x1(int i1) const { return n1 < 2 ? x1min : x1min + (x1max - x1min) * i1 / (n1 - 1.0); }
    double x2(int i2) const { return n2 < 2 ? x2min : x2min + (x2max - x2min) * i2 / (n2 - 1.0); }
    Vec2 point(int i1, int i2) const { return {x1(i1), x2(i2)}; }
    double& at(int i1, int i2) { return values[static_cast<std::size_t>(i1) * n2 + i2]; }
    double at(int i1, int i2) const { return values[static_cast<std::size_t>(i1) * n2 + i2]; }
};

// Affine rescale to [-1,1]; records the original extrema; error on a
// constant grid.
ImageGrid normalize_image(const ImageGrid& g);

}  // namespace rtm

#endif
