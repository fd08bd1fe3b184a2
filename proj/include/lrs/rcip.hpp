// Corner compression for the Nystrom system.  The dyadically refined corner
// meshes are never assembled globally: a recursion over local six-panel
// meshes produces a 64x64 block R per corner, the coarse system is solved in
// right-preconditioned form (I + A_circ diag(R)) Phi~ = G, and the density on
// the refined fine mesh is reconstructed by unrolling the recursion.

#ifndef LRS_RCIP_HPP
#define LRS_RCIP_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lrs/nystrom.hpp"

namespace lrs {

namespace detail {

inline constexpr int star_nodes = 4 * nodes_per_panel;   // two panels per side
inline constexpr int typeb_nodes = 6 * nodes_per_panel;  // three panels per side

/// One curve meeting a corner; distance d (in coarse-panel units) maps to the
/// native parameter t_corner + sign * d * ell.
struct CornerSide {
    CurveLabel label;
    double t_corner;
    double sign;
    double ell;
};

struct CornerGeom {
    CornerSide gamma;
    CornerSide arc;
    std::array<int, star_nodes> star;  // coarse node indices, nearest panel first
};

inline std::array<CornerGeom, 2> make_corner_geoms(const PanelMesh& mesh) {
    auto [glo, ghi] = mesh.curves.param_range(CurveLabel::GammaR);
    auto [alo, ahi] = mesh.curves.param_range(CurveLabel::LowerArc);
    const int n = mesh.n_pan;
    const double ellg = (ghi - glo) / n;
    const double ella = (ahi - alo) / n;
    const int fg = mesh.first_panel(CurveLabel::GammaR);
    const int fa = mesh.first_panel(CurveLabel::LowerArc);

    std::array<CornerGeom, 2> out;
    out[0].gamma = {CurveLabel::GammaR, glo, +1.0, ellg};
    out[0].arc = {CurveLabel::LowerArc, alo, +1.0, ella};
    out[1].gamma = {CurveLabel::GammaR, ghi, -1.0, ellg};
    out[1].arc = {CurveLabel::LowerArc, ahi, -1.0, ella};

    auto fill = [](CornerGeom& cg, std::array<int, 4> panels) {
        int m = 0;
        for (int p : panels)
            for (int b = 0; b < nodes_per_panel; ++b) cg.star[m++] = p * nodes_per_panel + b;
    };
    fill(out[0], {fg, fg + 1, fa, fa + 1});
    fill(out[1], {fg + n - 1, fg + n - 2, fa + n - 1, fa + n - 2});
    return out;
}

/// Two-curve local mesh around a corner; `dist` lists the panels of each side
/// as distance intervals in coarse-panel units, nearest the corner first.
inline PanelMesh make_corner_mesh(const CurveSet& curves, const CornerGeom& cg,
                                  const std::vector<std::pair<double, double>>& dist) {
    PanelMesh m{curves};
    m.level = MeshLevel::Fine;
    m.with_aux = false;
    auto add_side = [&](const CornerSide& s) {
        for (auto [a, b] : dist) {
            double ta = s.t_corner + s.sign * a * s.ell;
            double tb = s.t_corner + s.sign * b * s.ell;
            m.panels.push_back({s.label, std::min(ta, tb), std::max(ta, tb)});
        }
    };
    add_side(cg.gamma);
    add_side(cg.arc);
    m.gamma_panels = static_cast<int>(dist.size());
    m.arc_panels = static_cast<int>(dist.size());
    m.aux_panels = 0;
    materialize(m);
    return m;
}

/// Nodal interpolation from `coarse` to `fine`; `panel_map[q]` is the coarse
/// panel (within the side) containing fine panel q.
inline Eigen::MatrixXd prolongation(const PanelMesh& fine, const PanelMesh& coarse,
                                    const std::vector<int>& panel_map) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(fine.node_count(), coarse.node_count());
    double basis[nodes_per_panel];
    for (int p = 0; p < fine.panel_count(); ++p) {
        int side = p < fine.gamma_panels ? 0 : 1;
        int q = p - side * fine.gamma_panels;
        int cpi = side * coarse.gamma_panels + panel_map[q];
        const Panel& cp = coarse.panels[cpi];
        for (int a = 0; a < nodes_per_panel; ++a) {
            int i = p * nodes_per_panel + a;
            lagrange_basis(chart_coord(cp, fine.param[i]), basis);
            for (int b = 0; b < nodes_per_panel; ++b)
                P(i, cpi * nodes_per_panel + b) = basis[b];
        }
    }
    return P;
}

/// P_W = W_fine P W_coarse^{-1}, so that P_W^T restricts weighted sums.
inline Eigen::MatrixXd weight_prolongation(const Eigen::MatrixXd& P, const PanelMesh& fine,
                                           const PanelMesh& coarse) {
    Eigen::MatrixXd Pw = P;
    for (int i = 0; i < Pw.rows(); ++i)
        for (int j = 0; j < Pw.cols(); ++j) Pw(i, j) *= fine.weight[i] / coarse.weight[j];
    return Pw;
}

/// Local indices of the two panels nearest the corner on each side of the
/// three-panel-per-side mesh.
inline const std::array<int, star_nodes>& typeb_inner() {
    static const std::array<int, star_nodes> idx = [] {
        std::array<int, star_nodes> v{};
        int m = 0;
        for (int i = 0; i < 2 * nodes_per_panel; ++i) v[m++] = i;
        for (int i = 3 * nodes_per_panel; i < 5 * nodes_per_panel; ++i) v[m++] = i;
        return v;
    }();
    return idx;
}

struct CornerCompression {
    CMat R;                 // 64x64, acts on coarse star nodal values
    std::vector<CMat> Ms;   // per level, the 96x64 unroll operator
    std::vector<CMat> Rs;   // per level, R_i
};

/// Recursion over levels i = 1..n_sub.  At level i the local mesh spans
/// distance [0, 2^{-(n_sub-i)+1}] on each side; the innermost two panels of
/// the level-i system are replaced by the inverse of the previous R.
inline CornerCompression compress_corner(const CurveSet& curves, const WaveContext& ctx,
                                         const CornerGeom& cg, int n_sub) {
    CornerCompression out;
    for (int i = 1; i <= n_sub; ++i) {
        double s = std::pow(2.0, i - n_sub);
        PanelMesh mb =
            make_corner_mesh(curves, cg, {{0.0, 0.5 * s}, {0.5 * s, s}, {s, 2.0 * s}});
        PanelMesh mc = make_corner_mesh(curves, cg, {{0.0, s}, {s, 2.0 * s}});
        Eigen::MatrixXd P = prolongation(mb, mc, {0, 0, 1});
        Eigen::MatrixXd Pw = weight_prolongation(P, mb, mc);
        CMat lhs = assemble_A(mb, ctx);
        if (i == 1) {
            lhs += CMat::Identity(typeb_nodes, typeb_nodes);
        } else {
            const auto& in = typeb_inner();
            for (int a = 0; a < star_nodes; ++a)
                for (int b = 0; b < star_nodes; ++b) lhs(in[a], in[b]) = 0.0;
            CMat Rinv = out.R.partialPivLu().inverse();
            for (int a = 0; a < star_nodes; ++a)
                for (int b = 0; b < star_nodes; ++b) lhs(in[a], in[b]) += Rinv(a, b);
            for (int p = 2; p < 6; p += 3)
                for (int b = 0; b < nodes_per_panel; ++b) {
                    int o = p * nodes_per_panel + b;
                    lhs(o, o) += 1.0;
                }
        }
        CMat Mi = lhs.partialPivLu().solve(P.cast<complex>().eval());
        out.R = Pw.cast<complex>().transpose() * Mi;
        out.Ms.push_back(std::move(Mi));
        out.Rs.push_back(out.R);
    }
    return out;
}

/// Reference R without the recursion: one fully refined local mesh with
/// n_sub + 2 dyadic panels per side.
inline CMat compute_R_direct(const CurveSet& curves, const WaveContext& ctx,
                             const CornerGeom& cg, int n_sub) {
    std::vector<std::pair<double, double>> dist;
    std::vector<int> map;
    double prev = 0.0;
    for (int j = 0; j <= n_sub; ++j) {
        double next = std::pow(2.0, j - n_sub);
        dist.push_back({prev, next});
        map.push_back(0);
        prev = next;
    }
    dist.push_back({1.0, 2.0});
    map.push_back(1);
    PanelMesh mf = make_corner_mesh(curves, cg, dist);
    PanelMesh mc = make_corner_mesh(curves, cg, {{0.0, 1.0}, {1.0, 2.0}});
    Eigen::MatrixXd P = prolongation(mf, mc, map);
    Eigen::MatrixXd Pw = weight_prolongation(P, mf, mc);
    CMat K = assemble_A(mf, ctx);
    K += CMat::Identity(mf.node_count(), mf.node_count());
    return Pw.cast<complex>().transpose() * K.partialPivLu().solve(P.cast<complex>().eval());
}

}  // namespace detail

/// Factorized preconditioned coarse system plus the per-corner compression
/// artifacts needed to transform and reconstruct densities.
struct CompressedSolve {
    int n_sub = 0;
    int n_pan = 0;
    std::vector<detail::CornerGeom> geoms;
    std::vector<CMat> R;                  // per corner
    std::vector<std::vector<CMat>> Ms;    // per corner, per level
    std::vector<std::vector<CMat>> Rs;    // per corner, per level
    Eigen::PartialPivLU<CMat> lu;

    /// Transformed coarse density Phi~ from the right-hand side.
    CVec solve(const CVec& G) const { return lu.solve(G); }

    /// Physical coarse density diag(R, I) Phi~ (valid for coarse quadrature
    /// of smooth functionals such as the far field).
    CVec apply_R(const CVec& phi_transformed) const {
        CVec phi = phi_transformed;
        for (size_t c = 0; c < geoms.size(); ++c) {
            CVec v(detail::star_nodes);
            for (int a = 0; a < detail::star_nodes; ++a)
                v(a) = phi_transformed(geoms[c].star[a]);
            CVec w = R[c] * v;
            for (int a = 0; a < detail::star_nodes; ++a) phi(geoms[c].star[a]) = w(a);
        }
        return phi;
    }

    /// Pointwise density on the dyadically refined fine mesh, by unrolling
    /// the corner recursion level by level.
    CVec fine_density(const CVec& phi_transformed, const PanelMesh& fine) const {
        if (fine.level != MeshLevel::Fine || fine.n_sub != n_sub || fine.n_pan != n_pan)
            throw std::invalid_argument("fine_density: mesh mismatch");
        CVec phi_coa = apply_R(phi_transformed);
        if (n_sub == 0) return phi_coa;

        CVec out = CVec::Zero(fine.node_count());
        const int n = n_pan;
        const int Gf = fine.gamma_panels;
        const int Af = fine.arc_panels;
        auto copy_panel = [&](int coarse_p, int fine_p) {
            for (int b = 0; b < nodes_per_panel; ++b)
                out(fine_p * nodes_per_panel + b) = phi_coa(coarse_p * nodes_per_panel + b);
        };
        for (int p = 2; p <= n - 3; ++p) copy_panel(p, p + n_sub);
        for (int p = 2; p <= n - 3; ++p) copy_panel(n + p, Gf + p + n_sub);
        for (int p = 0; p < fine.aux_panels; ++p) copy_panel(2 * n + p, Gf + Af + p);

        for (size_t c = 0; c < geoms.size(); ++c) {
            const bool first_corner = (c == 0);
            auto gamma_outer = [&](int i) { return first_corner ? i + 1 : Gf - 2 - i; };
            auto arc_outer = [&](int i) { return Gf + (first_corner ? i + 1 : Af - 2 - i); };
            const int g_in0 = first_corner ? 0 : Gf - 1;
            const int g_in1 = first_corner ? 1 : Gf - 2;
            const int a_in0 = Gf + (first_corner ? 0 : Af - 1);
            const int a_in1 = Gf + (first_corner ? 1 : Af - 2);

            CVec rho(detail::star_nodes);
            for (int a = 0; a < detail::star_nodes; ++a)
                rho(a) = phi_transformed(geoms[c].star[a]);
            for (int i = n_sub; i >= 1; --i) {
                CVec v = Ms[c][i - 1] * rho;
                auto put = [&](int local_panel, int fine_p) {
                    for (int b = 0; b < nodes_per_panel; ++b)
                        out(fine_p * nodes_per_panel + b) = v(local_panel * nodes_per_panel + b);
                };
                put(2, gamma_outer(i));
                put(5, arc_outer(i));
                if (i > 1) {
                    // Inner part of v is R_{i-1} times the level-(i-1)
                    // transformed density.
                    const auto& in = detail::typeb_inner();
                    CVec w(detail::star_nodes);
                    for (int a = 0; a < detail::star_nodes; ++a) w(a) = v(in[a]);
                    rho = Rs[c][i - 2].partialPivLu().solve(w);
                } else {
                    put(0, g_in0);
                    put(1, g_in1);
                    put(3, a_in0);
                    put(4, a_in1);
                }
            }
        }
        return out;
    }
};

inline CompressedSolve build_compressed_solve(const PanelMesh& mesh, const WaveContext& ctx,
                                              int n_sub) {
    if (mesh.level != MeshLevel::Coarse)
        throw std::invalid_argument("build_compressed_solve: coarse mesh required");
    if (mesh.n_pan < 4)
        throw std::invalid_argument("build_compressed_solve: n_pan must be >= 4");
    if (n_sub < 0)
        throw std::invalid_argument("build_compressed_solve: n_sub must be >= 0");

    const int nn = mesh.node_count();
    CMat A = assemble_A(mesh, ctx);
    auto geoms = detail::make_corner_geoms(mesh);

    CompressedSolve out;
    out.n_sub = n_sub;
    out.n_pan = mesh.n_pan;
    out.geoms.assign(geoms.begin(), geoms.end());
    for (const auto& cg : out.geoms) {
        if (n_sub == 0) {
            CMat K(detail::star_nodes, detail::star_nodes);
            for (int a = 0; a < detail::star_nodes; ++a)
                for (int b = 0; b < detail::star_nodes; ++b) K(a, b) = A(cg.star[a], cg.star[b]);
            K += CMat::Identity(detail::star_nodes, detail::star_nodes);
            out.R.push_back(K.partialPivLu().inverse());
            out.Ms.emplace_back();
            out.Rs.emplace_back();
        } else {
            auto comp = detail::compress_corner(mesh.curves, ctx, cg, n_sub);
            out.R.push_back(std::move(comp.R));
            out.Ms.push_back(std::move(comp.Ms));
            out.Rs.push_back(std::move(comp.Rs));
        }
    }

    // M = I + A_circ diag(R): star-star blocks zeroed, star columns hit by R.
    CMat M = A;
    for (const auto& cg : out.geoms)
        for (int a = 0; a < detail::star_nodes; ++a)
            for (int b = 0; b < detail::star_nodes; ++b) M(cg.star[a], cg.star[b]) = 0.0;
    for (size_t c = 0; c < out.geoms.size(); ++c) {
        CMat cols(nn, detail::star_nodes);
        for (int b = 0; b < detail::star_nodes; ++b) cols.col(b) = M.col(out.geoms[c].star[b]);
        cols = (cols * out.R[c]).eval();
        for (int b = 0; b < detail::star_nodes; ++b) M.col(out.geoms[c].star[b]) = cols.col(b);
    }
    M += CMat::Identity(nn, nn);
    out.lu.compute(M);
    return out;
}

}  // namespace lrs

#endif  // LRS_RCIP_HPP
