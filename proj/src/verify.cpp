#include "rtm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rtm {

std::string format_report_table(const std::vector<IdentityReport>& reports) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %12s %12s %8s %s\n", "identity", "residual",
                  "threshold", "pass", "parameters");
    os << line;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%-28s %12.3e %12.3e %8s %s\n", r.name.c_str(),
                      r.max_residual, r.threshold, r.pass ? "yes" : "NO", r.params.c_str());
        os << line;
    }
    return os.str();
}

std::string format_report_machine(const std::vector<IdentityReport>& reports) {
    std::ostringstream os;
    for (const auto& r : reports)
        os << r.name << " " << r.max_residual << " " << r.threshold << " "
           << (r.pass ? "pass" : "fail") << "\n";
    return os.str();
}

IdentityReport check_helmholtz_kirchhoff(const std::string& name, const FieldSolver& solver,
                                         double rho, bool full_circle,
                                         const std::vector<std::pair<Vec2, Vec2>>& pairs, int M,
                                         double threshold, double R_guard) {
    if (R_guard > 0.0 && !(rho > R_guard))
        throw std::invalid_argument("check_helmholtz_kirchhoff: rho must exceed R");
    // quadrature points on the circle
    std::vector<Vec2> xi(M), nu(M);
    const double w = (full_circle ? 2.0 * pi : pi) * rho / M;
    for (int j = 0; j < M; ++j) {
        const double th = full_circle ? 2.0 * pi * j / M : pi * (j + 0.5) / M;
        xi[j] = {rho * std::cos(th), rho * std::sin(th)};
        nu[j] = {std::cos(th), std::sin(th)};
    }
    IdentityReport rep;
    rep.name = name;
    rep.threshold = threshold;
    rep.samples = static_cast<int>(pairs.size());
    double worst = 0.0;
    for (const auto& [x, z] : pairs) {
        const auto Gx = solver(x);
        const auto Gz = solver(z);
        std::vector<Complex> terms(M);
#pragma omp parallel for schedule(static)
        for (int j = 0; j < M; ++j) {
            const FieldValue a = Gx(xi[j]);
            const FieldValue b = Gz(xi[j]);
            terms[j] = std::conj(a.v) * dot(b.grad, nu[j]) - std::conj(dot(a.grad, nu[j])) * b.v;
        }
        Complex integral = 0.0;
        for (int j = 0; j < M; ++j) integral += w * terms[j];
        const Complex gxz = Gz(x).v;
        const Complex target = 2.0 * iu * std::imag(gxz);
        const double res = std::abs(integral - target) / std::max(std::abs(target), 1e-12);
        worst = std::max(worst, res);
    }
    rep.max_residual = worst;
    rep.pass = worst <= threshold;
    std::ostringstream ps;
    ps << "rho=" << rho << " M=" << M;
    rep.params = ps.str();
    return rep;
}

DecayReport check_remainder_decay(const std::string& name, const FieldSolver& solver,
                                  const std::function<double(Vec2)>& kappa_at,
                                  const std::vector<double>& radii, bool full_circle,
                                  const std::vector<Vec2>& xs, const std::vector<Vec2>& zs,
                                  int M_per_wavelength, double slope_lo, double slope_hi) {
    if (radii.size() < 3)
        throw std::invalid_argument("check_remainder_decay: need at least 3 radii");
    DecayReport out;
    out.radii = radii;

    // evaluators for every sample point (reused across radii)
    std::vector<std::function<FieldValue(Vec2)>> fx, fz;
    for (const auto& x : xs) fx.push_back(solver(x));
    for (const auto& z : zs) fz.push_back(solver(z));

    for (const double rho : radii) {
        const double arc = (full_circle ? 2.0 * pi : pi) * rho;
        const int M = std::max(256, static_cast<int>(std::ceil(arc * M_per_wavelength)));
        std::vector<Vec2> xi(M);
        std::vector<double> kap(M);
        const double w = arc / M;
        for (int j = 0; j < M; ++j) {
            const double th = full_circle ? 2.0 * pi * j / M : pi * (j + 0.5) / M;
            xi[j] = {rho * std::cos(th), rho * std::sin(th)};
            kap[j] = kappa_at(xi[j]);
        }
        // field values of every sample at the circle points
        const int nx = static_cast<int>(xs.size()), nz = static_cast<int>(zs.size());
        std::vector<Complex> Ax(static_cast<std::size_t>(nx) * M), Az(static_cast<std::size_t>(nz) * M);
#pragma omp parallel for schedule(dynamic)
        for (int j = 0; j < M; ++j) {
            for (int a = 0; a < nx; ++a) Ax[static_cast<std::size_t>(a) * M + j] = fx[a](xi[j]).v;
            for (int b = 0; b < nz; ++b) Az[static_cast<std::size_t>(b) * M + j] = fz[b](xi[j]).v;
        }
        double zmax = 0.0;
        for (int a = 0; a < nx; ++a)
            for (int b = 0; b < nz; ++b) {
                Complex val = 0.0;
                for (int j = 0; j < M; ++j)
                    val += w * kap[j] * std::conj(Ax[static_cast<std::size_t>(a) * M + j]) *
                           Az[static_cast<std::size_t>(b) * M + j];
                const Complex g = fz[b](xs[a]).v;
                zmax = std::max(zmax, std::abs(val - std::imag(g)));
            }
        out.zeta_max.push_back(zmax);
    }

    // least-squares slope of log zeta vs log rho
    const int n = static_cast<int>(radii.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double X = std::log(radii[i]), Y = std::log(std::max(out.zeta_max[i], 1e-300));
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.monotone = true;
    for (int i = 1; i < n; ++i) out.monotone = out.monotone && out.zeta_max[i] < out.zeta_max[i - 1];

    out.report.name = name;
    out.report.samples = static_cast<int>(xs.size() * zs.size());
    out.report.max_residual = out.slope;
    out.report.threshold = slope_hi;
    out.report.pass = out.slope >= slope_lo && out.slope <= slope_hi;
    std::ostringstream ps;
    ps << "slope=" << out.slope << " zeta=[";
    for (std::size_t i = 0; i < out.zeta_max.size(); ++i)
        ps << (i ? "," : "") << out.zeta_max[i];
    ps << "] monotone=" << (out.monotone ? "yes" : "no");
    out.report.params = ps.str();
    return out;
}

IdentityReport check_reciprocity(const std::string& name,
                                 const std::function<Complex(Vec2, Vec2)>& G,
                                 const std::vector<std::pair<Vec2, Vec2>>& pairs,
                                 double threshold) {
    IdentityReport rep;
    rep.name = name;
    rep.threshold = threshold;
    rep.samples = static_cast<int>(pairs.size());
    double worst = 0.0;
    for (const auto& [x, z] : pairs) {
        const Complex a = G(x, z);
        const Complex b = G(z, x);
        worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-12));
    }
    rep.max_residual = worst;
    rep.pass = worst <= threshold;
    return rep;
}

IdentityReport check_mixed_reciprocity(const std::string& name,
                                       const std::function<Complex(Vec2, Vec2)>& v_far,
                                       const std::function<Complex(Vec2, Vec2)>& gamma_ws,
                                       const std::vector<Vec2>& directions,
                                       const std::vector<Vec2>& sources, double threshold) {
    IdentityReport rep;
    rep.name = name;
    rep.threshold = threshold;
    rep.samples = static_cast<int>(directions.size() * sources.size());
    double worst = 0.0, scale = 0.0;
    std::vector<std::pair<Complex, Complex>> vals;
    for (const auto& d : directions)
        for (const auto& s : sources) {
            const Complex a = v_far(d, s);
            const Complex b = gamma_ws(d, s);
            vals.emplace_back(a, b);
            scale = std::max({scale, std::abs(a), std::abs(b)});
        }
    if (scale == 0.0) {
        rep.max_residual = 0.0;  // both sides vanish identically
        rep.pass = true;
        return rep;
    }
    for (const auto& [a, b] : vals) worst = std::max(worst, std::abs(a - b) / scale);
    rep.max_residual = worst;
    rep.pass = worst <= threshold;
    return rep;
}

}  // namespace rtm
