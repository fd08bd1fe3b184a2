// Inverse solver: far-field operator over spline-parameterized profiles, its
// derivative via the linearized Neumann problem, Levenberg-Marquardt steps
// with discrepancy-principle regularization, and the multi-frequency
// reconstruction loop.

#ifndef LRS_INVERSE_HPP
#define LRS_INVERSE_HPP

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "lrs/forward.hpp"

namespace lrs {

/// Panels per curve for data synthesis at wave number k.
inline int synthesis_n_pan(double k) { return static_cast<int>(std::lround(0.6 * k + 18.0)); }

/// Panels per curve for the solves inside the inversion loop (coarser than
/// synthesis so the data are not inverted with their own discretization).
inline int inversion_n_pan(double k) { return static_cast<int>(std::lround(0.5 * k + 14.0)); }

/// Geometry and resolution parameters shared across the inverse pipeline.
struct InverseGeometry {
    double R = 1.0;
    Vec2 aux_center{0.0, -0.5};
    double aux_radius = 0.1;
    int n_sub = 30;
};

/// Multi-frequency noisy far-field data.
struct MeasurementSet {
    std::vector<double> wave_numbers;          // ascending
    std::vector<Vec2> incident_directions;     // lower half circle
    std::vector<Vec2> observation_directions;  // upper half circle
    std::vector<CMat> data;                    // per k: n_f x n_d
    double delta = 0.0;

    int n_f() const { return static_cast<int>(observation_directions.size()); }
    int n_d() const { return static_cast<int>(incident_directions.size()); }

    void validate() const {
        if (wave_numbers.empty() || incident_directions.empty() || observation_directions.empty())
            throw std::invalid_argument("MeasurementSet: empty component");
        for (size_t m = 1; m < wave_numbers.size(); ++m)
            if (wave_numbers[m] <= wave_numbers[m - 1])
                throw std::invalid_argument("MeasurementSet: wave numbers must be ascending");
        for (const Vec2& d : incident_directions)
            if (d.y >= 0.0 || std::abs(norm(d) - 1.0) > 1e-12)
                throw std::invalid_argument("MeasurementSet: incident directions must be unit lower-half");
        for (const Vec2& d : observation_directions)
            if (d.y <= 0.0 || std::abs(norm(d) - 1.0) > 1e-12)
                throw std::invalid_argument("MeasurementSet: observation directions must be unit upper-half");
        if (data.size() != wave_numbers.size())
            throw std::invalid_argument("MeasurementSet: one data block per wave number required");
        for (const CMat& blk : data)
            if (blk.rows() != n_f() || blk.cols() != n_d())
                throw std::invalid_argument("MeasurementSet: data block shape mismatch");
        if (delta < 0.0) throw std::invalid_argument("MeasurementSet: delta must be >= 0");
    }
};

/// Angle of incidence theta with d = (sin theta, -cos theta).
inline double incidence_angle(Vec2 d) {
    if (d.y >= 0.0) throw std::invalid_argument("incidence_angle: d must be lower-half");
    return std::atan2(d.x, -d.y);
}

inline ForwardConfig inversion_config(const SurfaceProfile& profile, const InverseGeometry& geom,
                                      double k, Vec2 d, SystemVariant variant, int n_pan) {
    ForwardConfig cfg;
    cfg.profile = profile;
    cfg.R = geom.R;
    cfg.aux_center = geom.aux_center;
    cfg.aux_radius = geom.aux_radius;
    cfg.k = k;
    cfg.incidence = Incidence::plane(incidence_angle(d));
    cfg.n_pan = n_pan;
    cfg.n_sub = geom.n_sub;
    cfg.variant = variant;
    return cfg;
}

/// Far-field operator F_{d,k}[h]: two-curve forward solve on the given
/// profile, sampled at the observation directions.
inline CVec farfield_operator(const SurfaceProfile& profile, const InverseGeometry& geom,
                              double k, Vec2 d, const std::vector<Vec2>& observation) {
    ForwardConfig cfg = inversion_config(profile, geom, k, d, SystemVariant::TwoCurve,
                                         inversion_n_pan(k));
    return solve_forward(cfg).farfield(observation);
}

/// Forward solve for one (k, d) pair plus the boundary data needed by the
/// derivative: total field u and du/ds at the coarse GammaR nodes.
struct OperatorEval {
    ForwardSolution sol;
    CVec farfield;  // at the observation directions
    CVec u_total;   // empty until add_boundary_field
    CVec du_ds;
    CVec d2u_ds2;
};

inline OperatorEval evaluate_operator(const SurfaceProfile& profile, const InverseGeometry& geom,
                                      double k, Vec2 d, const std::vector<Vec2>& observation) {
    ForwardConfig cfg = inversion_config(profile, geom, k, d, SystemVariant::TwoCurve,
                                         inversion_n_pan(k));
    OperatorEval ev{solve_forward(cfg), {}, {}, {}};
    ev.farfield = ev.sol.farfield(observation);
    return ev;
}

/// Fill u_total and du_ds on the coarse GammaR nodes: u = u^i + u^r plus the
/// scattered field evaluated from the fine-mesh density.
inline void add_boundary_field(OperatorEval& ev, double theta, int n_sub) {
    const PanelMesh& coarse = ev.sol.mesh_coarse;
    PanelMesh fine = refine_corner_mesh(coarse, n_sub);
    CVec fine_density = ev.sol.solver.fine_density(ev.sol.phi_transformed, fine);
    CVec us = eval_field_on_gammaR(fine, fine_density, ev.sol.k, coarse);
    const int ng = coarse.gamma_panels * nodes_per_panel;
    ev.u_total = us;
    double k = ev.sol.k;
    Vec2 d{std::sin(theta), -std::cos(theta)};
    Vec2 dre{std::sin(theta), std::cos(theta)};
    for (int i = 0; i < ng; ++i) {
        Vec2 x = coarse.x[i];
        ev.u_total(i) += std::exp(complex(0.0, k * dot(d, x))) +
                         std::exp(complex(0.0, k * dot(dre, x)));
    }
    ev.du_ds = tangential_derivative(coarse, ev.u_total);
    ev.d2u_ds2 = tangential_derivative(coarse, ev.du_ds);
}

/// Boundary data of the linearized Neumann problem for a perturbation dh of
/// the profile: f = (d/ds)[(nu_2 dh)(du/ds)] + k^2 (nu_2 dh) u at the coarse
/// GammaR nodes.  The outer d/ds is expanded by the product rule,
/// f = A' du/ds + A d^2u/ds^2 + k^2 A u with A = nu_2 dh = dh / sqrt(1+h'^2),
/// so that the piecewise-C^3 factor dh is differentiated analytically and the
/// smooth field is the only numerically differentiated quantity.
/// dh holds (value, derivative in x_1) of the perturbation at the nodes.
inline CVec frechet_rhs(const PanelMesh& coarse, const CVec& u_total, const CVec& du_ds,
                        const CVec& d2u_ds2, const std::vector<Jet2>& dh, double k) {
    const int ng = coarse.gamma_panels * nodes_per_panel;
    if (u_total.size() != ng || du_ds.size() != ng || d2u_ds2.size() != ng ||
        static_cast<int>(dh.size()) != ng)
        throw std::invalid_argument("frechet_rhs: size mismatch");
    const SurfaceProfile& profile = coarse.curves.profile;
    CVec f(ng);
    for (int i = 0; i < ng; ++i) {
        Jet2 h = profile.eval(coarse.param[i]);
        double w2 = 1.0 + h.d1 * h.d1;
        double A = dh[i].v / std::sqrt(w2);
        // dA/ds = (1/sqrt(w2)) d/dx1 (dh / sqrt(w2))
        double Ap = (dh[i].d1 * w2 - dh[i].v * h.d1 * h.d2) / (w2 * w2);
        f(i) = Ap * du_ds(i) + A * d2u_ds2(i) + k * k * A * u_total(i);
    }
    return f;
}

/// Jacobian of the far-field operator at the profile underlying `ev`:
/// column i is the far field of the linearized Neumann problem with the
/// boundary data of the i-th spline basis element.  Reuses the factorized
/// forward system.
inline CMat frechet_jacobian(const OperatorEval& ev, const SplineBasis& basis,
                             const std::vector<Vec2>& observation) {
    if (ev.u_total.size() == 0)
        throw std::invalid_argument("frechet_jacobian: call add_boundary_field first");
    const PanelMesh& coarse = ev.sol.mesh_coarse;
    const int ng = coarse.gamma_panels * nodes_per_panel;
    CMat J(static_cast<Eigen::Index>(observation.size()), basis.M);
    std::vector<Jet2> dh(static_cast<size_t>(ng));
    for (int i = 0; i < basis.M; ++i) {
        for (int a = 0; a < ng; ++a) dh[static_cast<size_t>(a)] = basis.eval(i, coarse.param[a]);
        CVec f = frechet_rhs(coarse, ev.u_total, ev.du_ds, ev.d2u_ds2, dh, ev.sol.k);
        CVec G = assemble_G_neumann(coarse, f);
        CVec phit = ev.sol.solver.solve(G);
        CVec phi = ev.sol.solver.apply_R(phit);
        J.col(i) = far_field(coarse, phi, ev.sol.k, observation);
    }
    return J;
}

/// One regularized step: minimize ||J da + r||^2 + beta ||da||^2 over real
/// da with beta chosen by bisection so the model residual equals
/// rho_lm^2 ||r||^2.
struct LmStep {
    Eigen::VectorXd da;
    double beta = 0.0;
    bool bracket_edge = false;
};

inline LmStep lm_step(const CMat& J, const CVec& r, double rho_lm) {
    if (rho_lm <= 0.0 || rho_lm >= 1.0)
        throw std::invalid_argument("lm_step: rho_lm must be in (0, 1)");
    const Eigen::Index n = J.rows(), M = J.cols();
    if (r.size() != n) throw std::invalid_argument("lm_step: residual size mismatch");
    // Real-imaginary stacking: the update must be real.
    Eigen::MatrixXd A(2 * n, M);
    A.topRows(n) = J.real();
    A.bottomRows(n) = J.imag();
    Eigen::VectorXd b(2 * n);
    b.head(n) = r.real();
    b.tail(n) = r.imag();
    Eigen::MatrixXd JtJ = A.transpose() * A;
    Eigen::VectorXd Jtb = A.transpose() * b;

    double rnorm2 = b.squaredNorm();
    LmStep out;
    out.da = Eigen::VectorXd::Zero(M);
    if (rnorm2 == 0.0) return out;

    // Largest eigenvalue of J^T J by power iteration, 0.1% tolerance.
    Eigen::VectorXd v = Eigen::VectorXd::Ones(M).normalized();
    double s = 0.0;
    for (int it = 0; it < 60; ++it) {
        Eigen::VectorXd w = JtJ * v;
        double s_new = w.norm();
        if (s_new == 0.0) break;
        v = w / s_new;
        if (std::abs(s_new - s) <= 1e-3 * s_new) {
            s = s_new;
            break;
        }
        s = s_new;
    }
    if (s == 0.0) return out;  // zero Jacobian: no step at any beta

    auto model_residual2 = [&](double beta, Eigen::VectorXd& da) {
        Eigen::MatrixXd lhs = JtJ;
        lhs.diagonal().array() += beta;
        da = lhs.ldlt().solve(-Jtb);
        return (A * da + b).squaredNorm();
    };

    double target = rho_lm * rho_lm * rnorm2;
    double tol = 1e-3 * rnorm2;
    double lo = 1e-14 * s, hi = 1e6 * s;
    Eigen::VectorXd da(M);
    double res_lo = model_residual2(lo, da);
    if (res_lo >= target - tol) {
        // Target below the smallest attainable model residual.
        out.da = da;
        out.beta = lo;
        out.bracket_edge = res_lo > target + tol;
        return out;
    }
    double res_hi = model_residual2(hi, da);
    if (res_hi <= target + tol) {
        out.da = da;
        out.beta = hi;
        out.bracket_edge = res_hi < target - tol;
        return out;
    }
    // Bisection in log(beta); the model residual is increasing in beta.
    double llo = std::log(lo), lhi = std::log(hi), beta = lo;
    for (int it = 0; it < 60; ++it) {
        double lmid = 0.5 * (llo + lhi);
        beta = std::exp(lmid);
        double res = model_residual2(beta, da);
        if (std::abs(res - target) <= tol) break;
        (res < target ? llo : lhi) = lmid;
    }
    out.da = da;
    out.beta = beta;
    out.bracket_edge = std::abs((A * da + b).squaredNorm() - target) > tol;
    return out;
}

/// Mean relative data misfit over the incident directions:
/// (1/n_d) sum_l ||F_l - u_l||_2 / ||u_l||_2.
inline double err_k(const std::vector<CVec>& forward_fields, const CMat& measured) {
    if (static_cast<Eigen::Index>(forward_fields.size()) != measured.cols())
        throw std::invalid_argument("err_k: direction count mismatch");
    double acc = 0.0;
    for (Eigen::Index l = 0; l < measured.cols(); ++l) {
        double denom = measured.col(l).norm();
        if (denom == 0.0) throw std::invalid_argument("err_k: zero measurement norm");
        acc += (forward_fields[static_cast<size_t>(l)] - measured.col(l)).norm() / denom;
    }
    return acc / static_cast<double>(measured.cols());
}

/// Synthetic noisy data from the three-curve solver on the true profile:
/// u_delta = u + delta * zeta * ||u|| / ||zeta|| per incident direction,
/// with Re(zeta), Im(zeta) i.i.d. standard normal.
inline MeasurementSet synthesize_measurements(const SurfaceProfile& truth,
                                              const InverseGeometry& geom,
                                              const std::vector<double>& wave_numbers,
                                              const std::vector<Vec2>& incident_directions,
                                              int n_f, double delta, unsigned long long seed) {
    MeasurementSet ms;
    ms.wave_numbers = wave_numbers;
    ms.incident_directions = incident_directions;
    ms.observation_directions = upper_half_directions(n_f);
    ms.delta = delta;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double k : wave_numbers) {
        CMat blk(n_f, static_cast<Eigen::Index>(incident_directions.size()));
        for (size_t l = 0; l < incident_directions.size(); ++l) {
            ForwardConfig cfg = inversion_config(truth, geom, k, incident_directions[l],
                                                 SystemVariant::ThreeCurve, synthesis_n_pan(k));
            CVec u = solve_forward(cfg).farfield(ms.observation_directions);
            CVec zeta(n_f);
            for (int j = 0; j < n_f; ++j) {
                double re = gauss(rng), im = gauss(rng);
                zeta(j) = complex(re, im);
            }
            blk.col(static_cast<Eigen::Index>(l)) =
                delta == 0.0 ? u : CVec(u + delta * (u.norm() / zeta.norm()) * zeta);
        }
        ms.data.push_back(std::move(blk));
    }
    ms.validate();
    return ms;
}

struct ReconstructOptions {
    int M = 20;
    double rho_lm = 0.8;
    double tau = 1.5;
    int max_iter_per_k = 20;
    InverseGeometry geom;
    std::vector<double> initial;  // empty: flat start
};

struct IterationRecord {
    double k = 0.0;
    int iteration = 0;  // 1-based within the frequency stage
    double err = 0.0;   // Err_k before the step
    double beta = 0.0;
    bool bracket_edge = false;
};

struct StageResult {
    double k = 0.0;
    std::vector<double> coefficients;  // h^app at stage exit
    double final_err = 0.0;
    int iterations = 0;
    bool converged = false;  // Err_k < tau * delta at exit
};

struct ReconstructionResult {
    std::vector<IterationRecord> trajectory;
    std::vector<StageResult> stages;
    std::vector<double> coefficients;  // final h^app
};

/// Multi-frequency Newton-type reconstruction: per wave number (ascending),
/// iterate regularized steps until the data misfit drops below tau * delta
/// or the iteration cap is hit, then warm-start the next wave number.
inline ReconstructionResult reconstruct(const MeasurementSet& ms, const ReconstructOptions& opt) {
    ms.validate();
    if (opt.tau <= 1.0) throw std::invalid_argument("reconstruct: tau must be > 1");
    if (!opt.initial.empty() && static_cast<int>(opt.initial.size()) != opt.M)
        throw std::invalid_argument("reconstruct: initial coefficient count != M");
    std::vector<double> a =
        opt.initial.empty() ? std::vector<double>(static_cast<size_t>(opt.M), 0.0) : opt.initial;
    SplineBasis basis(opt.M, opt.geom.R);
    const int n_d = ms.n_d(), n_f = ms.n_f();
    double threshold = opt.tau * std::max(ms.delta, 1e-6);

    ReconstructionResult result;
    for (size_t m = 0; m < ms.wave_numbers.size(); ++m) {
        double k = ms.wave_numbers[m];
        const CMat& measured = ms.data[m];
        StageResult stage;
        stage.k = k;
        double err = 0.0;
        for (int iter = 0; iter <= opt.max_iter_per_k; ++iter) {
            SurfaceProfile profile = SurfaceProfile::spline(a, opt.geom.R);
            std::vector<OperatorEval> evals;
            std::vector<CVec> fields;
            for (int l = 0; l < n_d; ++l) {
                evals.push_back(evaluate_operator(profile, opt.geom, k, ms.incident_directions[l],
                                                  ms.observation_directions));
                fields.push_back(evals.back().farfield);
            }
            err = err_k(fields, measured);
            if (err < threshold) {
                stage.converged = true;
                break;
            }
            if (iter == opt.max_iter_per_k) break;

            CMat J(static_cast<Eigen::Index>(n_d) * n_f, opt.M);
            CVec r(static_cast<Eigen::Index>(n_d) * n_f);
            for (int l = 0; l < n_d; ++l) {
                add_boundary_field(evals[static_cast<size_t>(l)],
                                   incidence_angle(ms.incident_directions[l]), opt.geom.n_sub);
                J.middleRows(static_cast<Eigen::Index>(l) * n_f, n_f) = frechet_jacobian(
                    evals[static_cast<size_t>(l)], basis, ms.observation_directions);
                r.segment(static_cast<Eigen::Index>(l) * n_f, n_f) = fields[static_cast<size_t>(l)] -
                                                                     measured.col(l);
            }
            LmStep step = lm_step(J, r, opt.rho_lm);
            for (int i = 0; i < opt.M; ++i) a[static_cast<size_t>(i)] += step.da(i);
            ++stage.iterations;
            result.trajectory.push_back({k, stage.iterations, err, step.beta, step.bracket_edge});
        }
        stage.coefficients = a;
        stage.final_err = err;
        result.stages.push_back(std::move(stage));
    }
    result.coefficients = a;
    return result;
}

/// Max-norm and L2 profile errors of spline coefficients against a reference
/// profile, on an equispaced grid over (-R, R).
struct ProfileError {
    double linf = 0.0;
    double l2 = 0.0;
};

inline ProfileError profile_error(const std::vector<double>& coeffs, double R,
                                  const SurfaceProfile& truth, int grid = 512) {
    SurfaceProfile approx = SurfaceProfile::spline(coeffs, R);
    ProfileError out;
    double acc = 0.0;
    for (int i = 0; i < grid; ++i) {
        double x = -R + 2.0 * R * (i + 0.5) / grid;
        double e = approx.h(x) - truth.h(x);
        out.linf = std::max(out.linf, std::abs(e));
        acc += e * e;
    }
    out.l2 = std::sqrt(acc * 2.0 * R / grid);
    return out;
}

}  // namespace lrs

#endif  // LRS_INVERSE_HPP
