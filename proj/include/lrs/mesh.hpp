// Panelized discretization of the curves: composite 16-point Gauss-Legendre
// panels with per-node geometry, plus dyadic corner refinement.

#ifndef LRS_MESH_HPP
#define LRS_MESH_HPP

#include <stdexcept>
#include <utility>
#include <vector>

#include "lrs/geometry.hpp"
#include "lrs/specfun.hpp"

namespace lrs {

inline constexpr int nodes_per_panel = 16;

struct Panel {
    CurveLabel label;
    double t0 = 0.0;
    double t1 = 0.0;
};

enum class MeshLevel { Coarse, Fine };

struct PanelMesh {
    CurveSet curves;
    MeshLevel level = MeshLevel::Coarse;
    int n_pan = 0;
    int n_sub = 0;
    bool with_aux = true;

    std::vector<Panel> panels;    // GammaR panels, then LowerArc, then AuxCircle
    std::vector<double> param;    // per node
    std::vector<double> speed;    // |x'(t)| per node
    std::vector<double> weight;   // GL weight * speed * interval/2
    std::vector<Vec2> x;
    std::vector<Vec2> normal;

    int gamma_panels = 0;
    int arc_panels = 0;
    int aux_panels = 0;

    int panel_count() const { return static_cast<int>(panels.size()); }
    int node_count() const { return static_cast<int>(x.size()); }

    int first_panel(CurveLabel label) const {
        switch (label) {
            case CurveLabel::GammaR: return 0;
            case CurveLabel::LowerArc: return gamma_panels;
            case CurveLabel::AuxCircle: return gamma_panels + arc_panels;
        }
        throw std::logic_error("unreachable");
    }

    int panels_on(CurveLabel label) const {
        switch (label) {
            case CurveLabel::GammaR: return gamma_panels;
            case CurveLabel::LowerArc: return arc_panels;
            case CurveLabel::AuxCircle: return aux_panels;
        }
        throw std::logic_error("unreachable");
    }

    /// Panels p and q lie on the same curve and share a parameter endpoint
    /// (cyclically on the closed auxiliary circle).
    bool adjacent(int p, int q) const {
        const Panel& a = panels[p];
        const Panel& b = panels[q];
        if (a.label != b.label) return false;
        if (a.t1 == b.t0 || b.t1 == a.t0) return true;
        if (a.label == CurveLabel::AuxCircle) {
            auto [lo, hi] = curves.param_range(a.label);
            if ((a.t0 == lo && b.t1 == hi) || (b.t0 == lo && a.t1 == hi)) return true;
        }
        return false;
    }
};

namespace detail {

inline void append_panel_nodes(PanelMesh& mesh, const Panel& p, const QuadratureRule& gl) {
    double mid = 0.5 * (p.t0 + p.t1);
    double half = 0.5 * (p.t1 - p.t0);
    for (int j = 0; j < nodes_per_panel; ++j) {
        double t = mid + half * gl.nodes[j];
        CurvePoint cp = mesh.curves.at(p.label, t);
        mesh.param.push_back(t);
        mesh.speed.push_back(cp.speed);
        mesh.weight.push_back(gl.weights[j] * half * cp.speed);
        mesh.x.push_back(cp.x);
        mesh.normal.push_back(cp.normal);
    }
}

inline void materialize(PanelMesh& mesh) {
    static const QuadratureRule gl = gauss_legendre(nodes_per_panel);
    mesh.param.clear();
    mesh.speed.clear();
    mesh.weight.clear();
    mesh.x.clear();
    mesh.normal.clear();
    mesh.param.reserve(mesh.panels.size() * nodes_per_panel);
    for (const Panel& p : mesh.panels) append_panel_nodes(mesh, p, gl);
}

}  // namespace detail

inline PanelMesh build_coarse_mesh(const CurveSet& curves, int n_pan, bool with_aux = true) {
    if (n_pan < 2) throw std::invalid_argument("build_coarse_mesh: n_pan must be >= 2");
    PanelMesh mesh{curves};
    mesh.level = MeshLevel::Coarse;
    mesh.n_pan = n_pan;
    mesh.with_aux = with_aux;
    std::vector<CurveLabel> labels = {CurveLabel::GammaR, CurveLabel::LowerArc};
    if (with_aux) labels.push_back(CurveLabel::AuxCircle);
    for (CurveLabel label : labels) {
        auto [lo, hi] = curves.param_range(label);
        for (int i = 0; i < n_pan; ++i) {
            double t0 = lo + (hi - lo) * i / n_pan;
            double t1 = lo + (hi - lo) * (i + 1) / n_pan;
            mesh.panels.push_back({label, t0, t1});
        }
    }
    mesh.gamma_panels = n_pan;
    mesh.arc_panels = n_pan;
    mesh.aux_panels = with_aux ? n_pan : 0;
    detail::materialize(mesh);
    return mesh;
}

/// Dyadic corner refinement: on each curve meeting a corner, the single panel
/// touching the corner is replaced by n_sub + 1 panels obtained by repeatedly
/// halving toward the corner.
inline PanelMesh refine_corner_mesh(const PanelMesh& coarse, int n_sub) {
    if (coarse.level != MeshLevel::Coarse)
        throw std::invalid_argument("refine_corner_mesh: input must be a coarse mesh");
    if (n_sub < 0) throw std::invalid_argument("refine_corner_mesh: n_sub must be >= 0");
    PanelMesh mesh{coarse.curves};
    mesh.level = MeshLevel::Fine;
    mesh.n_pan = coarse.n_pan;
    mesh.n_sub = n_sub;
    mesh.with_aux = coarse.with_aux;

    // Subdivide [t0, t1] toward the endpoint `corner` (= t0 or t1).
    auto push_refined = [&](const Panel& p, bool corner_at_t0) {
        double len = p.t1 - p.t0;
        if (corner_at_t0) {
            double prev = p.t0;
            for (int level = n_sub; level >= 1; --level) {
                double next = p.t0 + len / std::pow(2.0, level);
                mesh.panels.push_back({p.label, prev, next});
                prev = next;
            }
            mesh.panels.push_back({p.label, prev, p.t1});
        } else {
            double prev = p.t1 - len / 2.0;
            mesh.panels.push_back({p.label, p.t0, n_sub >= 1 ? prev : p.t1});
            for (int level = 1; level <= n_sub; ++level) {
                double next = (level == n_sub) ? p.t1 : p.t1 - len / std::pow(2.0, level + 1);
                mesh.panels.push_back({p.label, prev, next});
                prev = next;
            }
        }
    };

    auto emit_curve = [&](CurveLabel label, bool corners) {
        int first = coarse.first_panel(label);
        int count = coarse.panels_on(label);
        for (int i = 0; i < count; ++i) {
            const Panel& p = coarse.panels[first + i];
            if (corners && i == 0 && n_sub > 0)
                push_refined(p, true);
            else if (corners && i == count - 1 && n_sub > 0)
                push_refined(p, false);
            else
                mesh.panels.push_back(p);
        }
        return count + (corners && n_sub > 0 ? 2 * n_sub : 0);
    };

    mesh.gamma_panels = emit_curve(CurveLabel::GammaR, true);
    mesh.arc_panels = emit_curve(CurveLabel::LowerArc, true);
    mesh.aux_panels = mesh.with_aux ? emit_curve(CurveLabel::AuxCircle, false) : 0;
    detail::materialize(mesh);
    return mesh;
}

}  // namespace lrs

#endif  // LRS_MESH_HPP
