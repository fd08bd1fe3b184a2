// Nystrom discretization: dense assembly of the block operator over a panel
// mesh (with product-integration corrections on self/adjacent panels),
// right-hand sides, far-field evaluation, and boundary/off-boundary field
// evaluation from densities.
//
// Block rows by target curve (system (I + A) Phi = G):
//   GammaR row:    -2 K'
//   LowerArc row:  -2 (K' - K'^re)
//   AuxCircle row: -2 (K' + i rho S)
// Unknowns are density point values at the quadrature nodes.

#ifndef LRS_NYSTROM_HPP
#define LRS_NYSTROM_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lrs/kernels.hpp"
#include "lrs/logquad.hpp"
#include "lrs/mesh.hpp"

namespace lrs {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

namespace detail {

inline const QuadratureRule& panel_rule() {
    static const QuadratureRule gl = gauss_legendre(nodes_per_panel);
    return gl;
}

/// Chart coordinate of parameter t on panel p: [-1, 1] inside the panel.
inline double chart_coord(const Panel& p, double t) {
    return (2.0 * t - p.t0 - p.t1) / (p.t1 - p.t0);
}

/// Parameter of the image-point singularity of K'^re on the lower arc:
/// x at angle t has image at angle 2*pi - t; pick the representative
/// (2*pi - t or 4*pi - t) nearest to the source panel.
inline double reflected_singular_param(const Panel& sp, double t) {
    double mid = 0.5 * (sp.t0 + sp.t1);
    double c1 = 2.0 * pi - t;
    double c2 = 4.0 * pi - t;
    return std::abs(c1 - mid) < std::abs(c2 - mid) ? c1 : c2;
}

struct RowKind {
    bool reflected = false;  // subtract K'^re
    bool impedance = false;  // add i rho S
};

inline RowKind row_kind(CurveLabel target) {
    switch (target) {
        case CurveLabel::GammaR: return {false, false};
        case CurveLabel::LowerArc: return {true, false};
        case CurveLabel::AuxCircle: return {false, true};
    }
    throw std::logic_error("unreachable");
}

}  // namespace detail

/// Dense Nystrom matrix of the block operator A on the mesh (the identity is
/// not included).  Works for the three-curve mesh, the two-curve mesh, and
/// the local corner meshes used by the compression recursion.
inline CMat assemble_A(const PanelMesh& mesh, const WaveContext& ctx) {
    const int n = mesh.node_count();
    const double k = ctx.k;
    const QuadratureRule& gl = detail::panel_rule();
    CMat A(n, n);

    const int np = mesh.panel_count();
    for (int tp = 0; tp < np; ++tp) {
        const Panel& tpan = mesh.panels[tp];
        detail::RowKind row = detail::row_kind(tpan.label);
        for (int sp = 0; sp < np; ++sp) {
            const Panel& span = mesh.panels[sp];
            const double half = 0.5 * (span.t1 - span.t0);
            const bool near_self =
                tpan.label == span.label && (tp == sp || mesh.adjacent(tp, sp));
            const bool re_pair = row.reflected && span.label == CurveLabel::LowerArc;

            for (int a = 0; a < nodes_per_panel; ++a) {
                const int i = tp * nodes_per_panel + a;
                const Vec2 xi = mesh.x[i];
                const Vec2 nui = mesh.normal[i];
                const double ti = mesh.param[i];

                // Optional log-split corrections for this target row.
                std::vector<double> wl_self, wl_re;
                double u0_self = 0.0, u0_re = 0.0;
                bool do_self = false, do_re = false;
                if (near_self) {
                    u0_self = detail::chart_coord(span, ti);
                    wl_self = log_weights(gl, u0_self);
                    do_self = true;
                }
                if (re_pair) {
                    double tstar = detail::reflected_singular_param(span, ti);
                    u0_re = detail::chart_coord(span, tstar);
                    if (std::abs(u0_re) <= 6.0) {
                        wl_re = log_weights(gl, u0_re);
                        do_re = true;
                    }
                }

                for (int b = 0; b < nodes_per_panel; ++b) {
                    const int j = sp * nodes_per_panel + b;
                    const Vec2 yj = mesh.x[j];
                    const double wj = mesh.weight[j];
                    const double sj = mesh.speed[j];
                    complex entry = 0.0;

                    if (do_self) {
                        KernelSplit kp, ss;
                        double lnfac;
                        if (i == j) {
                            kp.smooth = kprime_diagonal_smooth(
                                mesh.curves.nu_dot_second(tpan.label, ti), sj);
                            kp.logcoef = 0.0;
                            if (row.impedance) {
                                ss.smooth = single_diagonal_smooth(k);
                                ss.logcoef = -1.0 / (2.0 * pi);
                            }
                            lnfac = std::log(sj * half);
                        } else {
                            kp = kprime_split(xi, nui, yj, k);
                            if (row.impedance) ss = single_split(xi, yj, k);
                            double r = norm(xi - yj);
                            lnfac = std::log(r / std::abs(gl.nodes[b] - u0_self));
                        }
                        complex smooth = kp.smooth;
                        complex logc = kp.logcoef;
                        if (row.impedance) {
                            smooth += complex(0.0, ctx.rho_imp) * ss.smooth;
                            logc += complex(0.0, ctx.rho_imp) * ss.logcoef;
                        }
                        entry += (smooth + logc * lnfac) * wj + logc * sj * half * wl_self[b];
                    } else {
                        complex v = kernel_kprime(xi, nui, yj, k);
                        if (row.impedance) v += complex(0.0, ctx.rho_imp) * phi_k(xi, yj, k);
                        entry += v * wj;
                    }

                    if (re_pair) {
                        if (do_re) {
                            KernelSplit rs = kprime_reflected_split(xi, yj, k);
                            double rre = norm(reflect(xi) - yj);
                            double lnfac = std::log(rre / std::abs(gl.nodes[b] - u0_re));
                            entry -= (rs.smooth + rs.logcoef * lnfac) * wj +
                                     rs.logcoef * sj * half * wl_re[b];
                        } else {
                            entry -= kernel_kprime_reflected(xi, yj, k) * wj;
                        }
                    } else if (row.reflected) {
                        entry -= kernel_kprime_reflected(xi, yj, k) * wj;
                    }

                    A(i, j) = -2.0 * entry;
                }
            }
        }
    }
    return A;
}

/// Right-hand side with prescribed Neumann data f on GammaR: G = -2 f there,
/// zero on the other curves.
inline CVec assemble_G_neumann(const PanelMesh& mesh, const CVec& f_gammaR) {
    const int ng = mesh.gamma_panels * nodes_per_panel;
    if (f_gammaR.size() != ng)
        throw std::invalid_argument("assemble_G_neumann: data size mismatch");
    CVec G = CVec::Zero(mesh.node_count());
    G.head(ng) = -2.0 * f_gammaR;
    return G;
}

/// Plane-wave right-hand side: G = 2 d(u^i + u^r)/dnu on GammaR,
/// u^i = exp(ik d.x) with d = (sin theta, -cos theta),
/// u^r = exp(ik (x1 sin theta + x2 cos theta)).
inline CVec assemble_G_planewave(const PanelMesh& mesh, const WaveContext& ctx, double theta) {
    if (std::abs(theta) >= pi / 2.0)
        throw std::invalid_argument("assemble_G_planewave: |theta| must be < pi/2");
    const double k = ctx.k;
    Vec2 d{std::sin(theta), -std::cos(theta)};
    Vec2 dre{std::sin(theta), std::cos(theta)};
    CVec G = CVec::Zero(mesh.node_count());
    const int ng = mesh.gamma_panels * nodes_per_panel;
    for (int i = 0; i < ng; ++i) {
        Vec2 x = mesh.x[i];
        Vec2 nu = mesh.normal[i];
        complex ui = std::exp(complex(0.0, k * dot(d, x)));
        complex ur = std::exp(complex(0.0, k * dot(dre, x)));
        G(i) = 2.0 * complex(0.0, k) * (dot(d, nu) * ui + dot(dre, nu) * ur);
    }
    return G;
}

/// Point-source right-hand side: G = 2 d(Phi_k(.,y) + Phi_k(.,y^re))/dnu on
/// GammaR.  The source may lie above the surface (true scattering) or below
/// it (artificial solution with a known far field); it must be off GammaR
/// and off the lower arc.
inline CVec assemble_G_pointsource(const PanelMesh& mesh, const WaveContext& ctx, Vec2 y) {
    const double tol = 1e-10;
    if (std::abs(y.x) <= mesh.curves.R &&
        std::abs(y.y - mesh.curves.profile.h(y.x)) < tol)
        throw std::invalid_argument("assemble_G_pointsource: source on the surface");
    if (y.y < 0.0 && std::abs(norm(y) - mesh.curves.R) < tol)
        throw std::invalid_argument("assemble_G_pointsource: source on the lower arc");
    CVec G = CVec::Zero(mesh.node_count());
    const int ng = mesh.gamma_panels * nodes_per_panel;
    for (int i = 0; i < ng; ++i) {
        Vec2 x = mesh.x[i];
        Vec2 nu = mesh.normal[i];
        G(i) = 2.0 * (kernel_kprime(x, nu, y, ctx.k) + kernel_kprime(x, nu, reflect(y), ctx.k));
    }
    return G;
}

/// Far-field pattern of the single-layer ansatz:
/// u_inf(xhat) = gamma * sum_curves integral exp(-ik xhat.y) phi(y) ds(y),
/// gamma = exp(i pi/4) / sqrt(8 pi k).
inline CVec far_field(const PanelMesh& mesh, const CVec& density, double k,
                      const std::vector<Vec2>& directions) {
    if (density.size() != mesh.node_count())
        throw std::invalid_argument("far_field: density size mismatch");
    complex gamma = std::exp(complex(0.0, pi / 4.0)) / std::sqrt(8.0 * pi * k);
    CVec out(static_cast<Eigen::Index>(directions.size()));
    for (size_t m = 0; m < directions.size(); ++m) {
        complex acc = 0.0;
        for (int j = 0; j < mesh.node_count(); ++j)
            acc += std::exp(complex(0.0, -k * dot(directions[m], mesh.x[j]))) * density(j) *
                   mesh.weight[j];
        out(static_cast<Eigen::Index>(m)) = gamma * acc;
    }
    return out;
}

/// Single-layer field at a point away from the boundary (plain quadrature;
/// points closer than one panel length to the nearest node are rejected).
inline complex eval_single_layer(const PanelMesh& mesh, const CVec& density, double k, Vec2 z) {
    double min_dist = 1e300, max_panel = 0.0;
    for (int p = 0; p < mesh.panel_count(); ++p) {
        const Panel& pan = mesh.panels[p];
        double plen = 0.0;
        for (int b = 0; b < nodes_per_panel; ++b)
            plen += mesh.weight[p * nodes_per_panel + b];
        for (int b = 0; b < nodes_per_panel; ++b)
            min_dist = std::min(min_dist, norm(z - mesh.x[p * nodes_per_panel + b]));
        max_panel = std::max(max_panel, plen);
    }
    if (min_dist < max_panel)
        throw std::invalid_argument("eval_single_layer: point too close to the boundary");
    complex acc = 0.0;
    for (int j = 0; j < mesh.node_count(); ++j)
        acc += phi_k(z, mesh.x[j], k) * density(j) * mesh.weight[j];
    return acc;
}

namespace detail {

/// Barycentric weights for the 16 Gauss-Legendre nodes.
inline const std::vector<double>& barycentric_weights() {
    static const std::vector<double> w = [] {
        const QuadratureRule& gl = panel_rule();
        std::vector<double> out(nodes_per_panel, 1.0);
        for (int i = 0; i < nodes_per_panel; ++i)
            for (int j = 0; j < nodes_per_panel; ++j)
                if (j != i) out[i] /= gl.nodes[i] - gl.nodes[j];
        return out;
    }();
    return w;
}

/// Values of the 16 Lagrange basis polynomials at chart coordinate u.
inline void lagrange_basis(double u, double* out) {
    const QuadratureRule& gl = panel_rule();
    const std::vector<double>& bw = barycentric_weights();
    for (int j = 0; j < nodes_per_panel; ++j) {
        if (u == gl.nodes[j]) {
            for (int m = 0; m < nodes_per_panel; ++m) out[m] = (m == j) ? 1.0 : 0.0;
            return;
        }
    }
    double denom = 0.0;
    for (int j = 0; j < nodes_per_panel; ++j) {
        out[j] = bw[j] / (u - gl.nodes[j]);
        denom += out[j];
    }
    for (int j = 0; j < nodes_per_panel; ++j) out[j] /= denom;
}

/// Spectral differentiation matrix on the 16 chart nodes.
inline const Eigen::MatrixXd& chart_diff_matrix() {
    static const Eigen::MatrixXd D = [] {
        const QuadratureRule& gl = panel_rule();
        const std::vector<double>& bw = barycentric_weights();
        Eigen::MatrixXd M(nodes_per_panel, nodes_per_panel);
        for (int i = 0; i < nodes_per_panel; ++i) {
            double rowsum = 0.0;
            for (int j = 0; j < nodes_per_panel; ++j) {
                if (i == j) continue;
                M(i, j) = (bw[j] / bw[i]) / (gl.nodes[i] - gl.nodes[j]);
                rowsum += M(i, j);
            }
            M(i, i) = -rowsum;
        }
        return M;
    }();
    return D;
}

}  // namespace detail

/// Single-layer field evaluated at on-curve GammaR parameters `targets` from
/// a density on `mesh`, with log-split product integration against nearby
/// GammaR source panels.
inline CVec eval_single_layer_on_gammaR(const PanelMesh& mesh, const CVec& density, double k,
                                        const std::vector<double>& targets) {
    const QuadratureRule& gl = detail::panel_rule();
    CVec out = CVec::Zero(static_cast<Eigen::Index>(targets.size()));
    for (size_t m = 0; m < targets.size(); ++m) {
        const double t = targets[m];
        const CurvePoint cp = mesh.curves.at(CurveLabel::GammaR, t);
        complex acc = 0.0;
        for (int sp = 0; sp < mesh.panel_count(); ++sp) {
            const Panel& span = mesh.panels[sp];
            double half = 0.5 * (span.t1 - span.t0);
            bool corrected = false;
            double u0 = 0.0;
            if (span.label == CurveLabel::GammaR) {
                u0 = detail::chart_coord(span, t);
                corrected = std::abs(u0) <= 4.0;
            }
            std::vector<double> wl;
            if (corrected) wl = log_weights(gl, u0);
            for (int b = 0; b < nodes_per_panel; ++b) {
                int j = sp * nodes_per_panel + b;
                if (corrected) {
                    KernelSplit ss;
                    double lnfac;
                    if (mesh.param[j] == t) {
                        ss.smooth = single_diagonal_smooth(k);
                        ss.logcoef = -1.0 / (2.0 * pi);
                        lnfac = std::log(mesh.speed[j] * half);
                    } else {
                        ss = single_split(cp.x, mesh.x[j], k);
                        double r = norm(cp.x - mesh.x[j]);
                        lnfac = std::log(r / std::abs(gl.nodes[b] - u0));
                    }
                    acc += (ss.smooth + ss.logcoef * lnfac) * density(j) * mesh.weight[j] +
                           ss.logcoef * mesh.speed[j] * half * wl[b] * density(j);
                } else {
                    acc += phi_k(cp.x, mesh.x[j], k) * density(j) * mesh.weight[j];
                }
            }
        }
        out(static_cast<Eigen::Index>(m)) = acc;
    }
    return out;
}

/// Restriction from fine-mesh GammaR nodal values to coarse GammaR nodes by
/// panel-wise degree-15 interpolation on the fine panels.
inline CVec restrict_gammaR_fine_to_coarse(const PanelMesh& fine, const CVec& fine_values,
                                           const PanelMesh& coarse) {
    const int ngc = coarse.gamma_panels * nodes_per_panel;
    CVec out(ngc);
    double basis[nodes_per_panel];
    for (int i = 0; i < ngc; ++i) {
        double t = coarse.param[i];
        int fp = -1;
        for (int p = 0; p < fine.gamma_panels; ++p) {
            const Panel& pan = fine.panels[p];
            if (t >= pan.t0 && t <= pan.t1) {
                fp = p;
                break;
            }
        }
        if (fp < 0) throw std::logic_error("restrict_gammaR_fine_to_coarse: target off mesh");
        detail::lagrange_basis(detail::chart_coord(fine.panels[fp], t), basis);
        complex acc = 0.0;
        for (int b = 0; b < nodes_per_panel; ++b)
            acc += basis[b] * fine_values(fp * nodes_per_panel + b);
        out(i) = acc;
    }
    return out;
}

/// Scattered field on coarse GammaR nodes from a fine-mesh density:
/// evaluate the single layer at the fine GammaR nodes, then restrict.
inline CVec eval_field_on_gammaR(const PanelMesh& fine, const CVec& fine_density, double k,
                                 const PanelMesh& coarse) {
    std::vector<double> fine_targets(fine.gamma_panels * nodes_per_panel);
    for (size_t i = 0; i < fine_targets.size(); ++i) fine_targets[i] = fine.param[i];
    CVec on_fine = eval_single_layer_on_gammaR(fine, fine_density, k, fine_targets);
    return restrict_gammaR_fine_to_coarse(fine, on_fine, coarse);
}

/// Arc-length derivative du/ds of panel-wise degree-15 interpolants of nodal
/// values on coarse GammaR.
inline CVec tangential_derivative(const PanelMesh& mesh, const CVec& gammaR_values) {
    const int ng = mesh.gamma_panels * nodes_per_panel;
    if (gammaR_values.size() != ng)
        throw std::invalid_argument("tangential_derivative: size mismatch");
    const Eigen::MatrixXd& D = detail::chart_diff_matrix();
    CVec out(ng);
    for (int p = 0; p < mesh.gamma_panels; ++p) {
        const Panel& pan = mesh.panels[p];
        double half = 0.5 * (pan.t1 - pan.t0);
        for (int a = 0; a < nodes_per_panel; ++a) {
            complex acc = 0.0;
            for (int b = 0; b < nodes_per_panel; ++b)
                acc += D(a, b) * gammaR_values(p * nodes_per_panel + b);
            int i = p * nodes_per_panel + a;
            out(i) = acc / (half * mesh.speed[i]);
        }
    }
    return out;
}

}  // namespace lrs

#endif  // LRS_NYSTROM_HPP
