// End-to-end forward scattering solves: configuration, the RCIP-compressed
// coarse solve, a direct fine-mesh reference solve, validation oracles, and
// convergence studies.

#ifndef LRS_FORWARD_HPP
#define LRS_FORWARD_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "lrs/nystrom.hpp"
#include "lrs/rcip.hpp"

namespace lrs {

enum class SystemVariant { ThreeCurve, TwoCurve };

struct Incidence {
    enum class Kind { PlaneWave, PointSource } kind = Kind::PlaneWave;
    double theta = 0.0;   // plane wave: angle of incidence, |theta| < pi/2
    Vec2 source{0.0, 1.0};  // point source location in D_+

    static Incidence plane(double theta) { return {Kind::PlaneWave, theta, {}}; }
    static Incidence point(Vec2 y) { return {Kind::PointSource, 0.0, y}; }
};

struct ForwardConfig {
    SurfaceProfile profile;
    double R = 1.0;
    Vec2 aux_center{0.0, -0.5};
    double aux_radius = 0.1;
    double k = 1.0;
    double rho_imp = 1.0;
    Incidence incidence;
    int n_pan = 10;
    int n_sub = 30;
    SystemVariant variant = SystemVariant::ThreeCurve;

    CurveSet curves() const { return CurveSet(profile, R, aux_center, aux_radius); }

    WaveContext context() const {
        WaveContext ctx(k, rho_imp);
        if (variant == SystemVariant::ThreeCurve) ctx.check_aux_radius(aux_radius);
        return ctx;
    }
};

/// n equidistant observation directions on the open upper half circle.
inline std::vector<Vec2> upper_half_directions(int n) {
    std::vector<Vec2> dirs(n);
    for (int i = 0; i < n; ++i) {
        double a = pi * (i + 1) / (n + 1);
        dirs[i] = {std::cos(a), std::sin(a)};
    }
    return dirs;
}

/// Closed-form far field of the point source y above a flat surface:
/// u_inf(xhat; y) = -gamma (exp(-ik xhat.y) + exp(-ik xhat.y^re)).
inline CVec exact_pointsource_farfield(Vec2 y, double k, const std::vector<Vec2>& directions) {
    complex gamma = std::exp(complex(0.0, pi / 4.0)) / std::sqrt(8.0 * pi * k);
    CVec out(static_cast<Eigen::Index>(directions.size()));
    for (size_t m = 0; m < directions.size(); ++m) {
        Vec2 d = directions[m];
        out(static_cast<Eigen::Index>(m)) =
            -gamma * (std::exp(complex(0.0, -k * dot(d, y))) +
                      std::exp(complex(0.0, -k * dot(d, reflect(y)))));
    }
    return out;
}

inline CVec incident_rhs(const PanelMesh& mesh, const WaveContext& ctx, const Incidence& inc) {
    if (inc.kind == Incidence::Kind::PlaneWave)
        return assemble_G_planewave(mesh, ctx, inc.theta);
    return assemble_G_pointsource(mesh, ctx, inc.source);
}

/// Direct unpreconditioned solve of (I + A) Phi = G on the given mesh.
inline CVec solve_direct(const PanelMesh& mesh, const WaveContext& ctx, const CVec& G) {
    CMat A = assemble_A(mesh, ctx);
    A += CMat::Identity(mesh.node_count(), mesh.node_count());
    return Eigen::PartialPivLU<CMat>(A).solve(G);
}

/// Result of an RCIP-compressed forward solve.
struct ForwardSolution {
    PanelMesh mesh_coarse;
    CompressedSolve solver;     // factorized preconditioned system + R artifacts
    CVec phi_transformed;       // coarse transformed density (Phi tilde)
    CVec phi_coarse;            // physical coarse density diag(R, I) Phi tilde
    double k = 0.0;

    CVec farfield(const std::vector<Vec2>& directions) const {
        return far_field(mesh_coarse, phi_coarse, k, directions);
    }
};

inline ForwardSolution solve_forward(const ForwardConfig& config) {
    CurveSet curves = config.curves();
    WaveContext ctx = config.context();
    PanelMesh mesh =
        build_coarse_mesh(curves, config.n_pan, config.variant == SystemVariant::ThreeCurve);
    CompressedSolve solver = build_compressed_solve(mesh, ctx, config.n_sub);
    CVec G = incident_rhs(mesh, ctx, config.incidence);
    ForwardSolution sol{mesh, std::move(solver), {}, {}, ctx.k};
    sol.phi_transformed = sol.solver.solve(G);
    sol.phi_coarse = sol.solver.apply_R(sol.phi_transformed);
    return sol;
}

/// Relative far-field error of the point-source solve against the closed
/// form, over the given directions.
inline double pointsource_relative_error(const ForwardConfig& config,
                                         const std::vector<Vec2>& directions) {
    ForwardSolution sol = solve_forward(config);
    CVec approx = sol.farfield(directions);
    CVec exact = exact_pointsource_farfield(config.incidence.source, config.k, directions);
    return (approx - exact).norm() / exact.norm();
}

/// Resolution sweep: relative far-field error vs n_pan.
struct ConvergenceRow {
    int n_pan;
    double relative_error;
};

inline std::vector<ConvergenceRow> convergence_study(ForwardConfig config,
                                                     const std::vector<int>& n_pan_list,
                                                     const std::vector<Vec2>& directions) {
    std::vector<ConvergenceRow> rows;
    for (int np : n_pan_list) {
        config.n_pan = np;
        rows.push_back({np, pointsource_relative_error(config, directions)});
    }
    return rows;
}

/// Total field u = u^i + u^r + u^s at a point of D_+ away from the boundary,
/// for plane-wave incidence at angle theta.
inline complex total_field_at(const ForwardSolution& sol, const PanelMesh& fine_mesh,
                              const CVec& fine_density, double theta, Vec2 z) {
    double k = sol.k;
    Vec2 d{std::sin(theta), -std::cos(theta)};
    Vec2 dre{std::sin(theta), std::cos(theta)};
    complex ui = std::exp(complex(0.0, k * dot(d, z)));
    complex ur = std::exp(complex(0.0, k * dot(dre, z)));
    return ui + ur + eval_single_layer(fine_mesh, fine_density, k, z);
}

/// Mixed reciprocity check: u_inf(d; y) vs gamma * u(y; -d).  Returns the
/// relative discrepancy.
inline double check_mixed_reciprocity(const ForwardConfig& base, Vec2 y, Vec2 d) {
    if (d.y <= 0.0) throw std::invalid_argument("check_mixed_reciprocity: d must be upper-half");
    // Left side: point source at y, far field of the total field
    // u^s + Phi(., y) + Phi(., y^re) in direction d.
    ForwardConfig ps = base;
    ps.incidence = Incidence::point(y);
    ForwardSolution lhs_sol = solve_forward(ps);
    complex lhs = lhs_sol.farfield({d})(0) - exact_pointsource_farfield(y, base.k, {d})(0);

    // Right side: plane wave with incident direction -d, total field at y.
    // -d = (sin theta, -cos theta) => theta = atan2(-d.x, d.y).
    double theta = std::atan2(-d.x, d.y);
    ForwardConfig pw = base;
    pw.incidence = Incidence::plane(theta);
    ForwardSolution pw_sol = solve_forward(pw);
    PanelMesh fine = refine_corner_mesh(pw_sol.mesh_coarse, pw.n_sub);
    CVec fine_density = pw_sol.solver.fine_density(pw_sol.phi_transformed, fine);
    complex u_total = total_field_at(pw_sol, fine, fine_density, theta, y);
    complex gamma = std::exp(complex(0.0, pi / 4.0)) / std::sqrt(8.0 * pi * base.k);
    complex rhs = gamma * u_total;
    return std::abs(lhs - rhs) / std::abs(rhs);
}

/// Mixed reciprocity over a grid of sources and directions, sharing the
/// forward solves: one plane-wave solve per direction, one point-source
/// solve per source.  Returns discrepancies indexed (source, direction).
inline Eigen::MatrixXd mixed_reciprocity_grid(const ForwardConfig& base,
                                              const std::vector<Vec2>& ys,
                                              const std::vector<Vec2>& ds) {
    complex gamma = std::exp(complex(0.0, pi / 4.0)) / std::sqrt(8.0 * pi * base.k);
    std::vector<std::vector<complex>> utot(ds.size(), std::vector<complex>(ys.size()));
    for (size_t j = 0; j < ds.size(); ++j) {
        if (ds[j].y <= 0.0)
            throw std::invalid_argument("mixed_reciprocity_grid: d must be upper-half");
        double theta = std::atan2(-ds[j].x, ds[j].y);
        ForwardConfig pw = base;
        pw.incidence = Incidence::plane(theta);
        ForwardSolution sol = solve_forward(pw);
        PanelMesh fine = refine_corner_mesh(sol.mesh_coarse, pw.n_sub);
        CVec fd = sol.solver.fine_density(sol.phi_transformed, fine);
        for (size_t i = 0; i < ys.size(); ++i)
            utot[j][i] = total_field_at(sol, fine, fd, theta, ys[i]);
    }
    Eigen::MatrixXd out(static_cast<Eigen::Index>(ys.size()),
                        static_cast<Eigen::Index>(ds.size()));
    for (size_t i = 0; i < ys.size(); ++i) {
        ForwardConfig ps = base;
        ps.incidence = Incidence::point(ys[i]);
        ForwardSolution sol = solve_forward(ps);
        CVec ffs = sol.farfield(ds);
        CVec ffpair = exact_pointsource_farfield(ys[i], base.k, ds);
        for (size_t j = 0; j < ds.size(); ++j) {
            complex lhs = ffs(static_cast<Eigen::Index>(j)) - ffpair(static_cast<Eigen::Index>(j));
            complex rhs = gamma * utot[j][i];
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::abs(lhs - rhs) / std::abs(rhs);
        }
    }
    return out;
}

}  // namespace lrs

#endif  // LRS_FORWARD_HPP
