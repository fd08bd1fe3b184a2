// Command-line driver: forward solves, convergence studies, reciprocity
// checks, synthetic data generation, and profile reconstruction.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lrs/io.hpp"

namespace {

namespace fs = std::filesystem;
using lrs::fp17;
using lrs::json;

struct RunSpec {
    std::string config_path;
    std::string out_dir = ".";
    unsigned long long seed = 0;
    bool quiet = false;
};

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void log_line(const RunSpec& spec, const std::string& msg) {
    if (!spec.quiet) std::printf("%s\n", msg.c_str());
}

fs::path prepare_out_dir(const RunSpec& spec) {
    fs::path out(spec.out_dir);
    fs::create_directories(out);
    return out;
}

std::vector<double> direction_angles(const std::vector<lrs::Vec2>& dirs) {
    std::vector<double> a;
    for (lrs::Vec2 d : dirs) a.push_back(std::atan2(d.y, d.x));
    return a;
}

int cmd_forward(const RunSpec& spec) {
    json j = lrs::load_json_file(spec.config_path);
    lrs::ForwardConfig cfg = lrs::forward_config_from_json(j);
    int n_obs = lrs::get_field_or<int>(j, "observation_count", 51);
    if (n_obs < 1) throw lrs::ConfigError("observation_count must be >= 1");

    Timer timer;
    lrs::ForwardSolution sol = lrs::solve_forward(cfg);
    auto obs = lrs::upper_half_directions(n_obs);
    lrs::CVec ff = sol.farfield(obs);
    double elapsed = timer.ms();

    fs::path out = prepare_out_dir(spec);
    std::ostringstream ffcsv;
    ffcsv << "angle,re,im\n";
    auto angles = direction_angles(obs);
    for (int i = 0; i < n_obs; ++i)
        ffcsv << fp17(angles[static_cast<size_t>(i)]) << ',' << fp17(ff(i).real()) << ','
              << fp17(ff(i).imag()) << '\n';
    lrs::write_text_file(out / "farfield.csv", ffcsv.str());

    std::ostringstream dcsv;
    dcsv << "curve,param,x1,x2,re,im\n";
    const lrs::PanelMesh& mesh = sol.mesh_coarse;
    for (int i = 0; i < mesh.node_count(); ++i) {
        const char* curve = i < mesh.gamma_panels * lrs::nodes_per_panel ? "gammaR"
                            : i < (mesh.gamma_panels + mesh.arc_panels) * lrs::nodes_per_panel
                                ? "arc"
                                : "aux";
        dcsv << curve << ',' << fp17(mesh.param[i]) << ',' << fp17(mesh.x[i].x) << ','
             << fp17(mesh.x[i].y) << ',' << fp17(sol.phi_coarse(i).real()) << ','
             << fp17(sol.phi_coarse(i).imag()) << '\n';
    }
    lrs::write_text_file(out / "density.csv", dcsv.str());

    json summary;
    summary["k"] = cfg.k;
    summary["n_pan"] = cfg.n_pan;
    summary["n_sub"] = cfg.n_sub;
    summary["variant"] = cfg.variant == lrs::SystemVariant::ThreeCurve ? "three-curve" : "two-curve";
    summary["observation_count"] = n_obs;
    summary["max_farfield_abs"] = ff.cwiseAbs().maxCoeff();
    {
        lrs::CVec G = lrs::incident_rhs(mesh, cfg.context(), cfg.incidence);
        double gn = G.norm();
        double res = (sol.solver.lu.reconstructedMatrix() * sol.phi_transformed - G).norm();
        summary["solve_residual"] = gn > 0.0 ? res / gn : res;
    }
    if (cfg.incidence.kind == lrs::Incidence::Kind::PointSource) {
        lrs::CVec exact = lrs::exact_pointsource_farfield(cfg.incidence.source, cfg.k, obs);
        summary["closed_form_relative_error"] = (ff - exact).norm() / exact.norm();
    }
    lrs::write_text_file(out / "summary.json", summary.dump(2) + "\n");
    log_line(spec, "forward solve done in " + fp17(elapsed) + " ms");
    return 0;
}

int cmd_convergence(const RunSpec& spec) {
    json j = lrs::load_json_file(spec.config_path);
    lrs::ForwardConfig cfg = lrs::forward_config_from_json(j);
    if (cfg.incidence.kind != lrs::Incidence::Kind::PointSource)
        throw lrs::ConfigError("convergence requires point incidence (closed-form reference)");
    auto n_pan_list = lrs::get_field<std::vector<int>>(j, "n_pan_list");
    if (n_pan_list.empty()) throw lrs::ConfigError("n_pan_list must be nonempty");
    int n_obs = lrs::get_field_or<int>(j, "observation_count", 11);

    Timer timer;
    auto rows = lrs::convergence_study(cfg, n_pan_list, lrs::upper_half_directions(n_obs));
    double elapsed = timer.ms();

    fs::path out = prepare_out_dir(spec);
    std::ostringstream csv;
    csv << "n_pan,relative_error\n";
    for (const auto& r : rows) csv << r.n_pan << ',' << fp17(r.relative_error) << '\n';
    lrs::write_text_file(out / "convergence.csv", csv.str());

    json summary;
    summary["k"] = cfg.k;
    summary["n_sub"] = cfg.n_sub;
    summary["final_relative_error"] = rows.back().relative_error;
    lrs::write_text_file(out / "summary.json", summary.dump(2) + "\n");
    log_line(spec, "convergence study done in " + fp17(elapsed) + " ms");
    return 0;
}

int cmd_reciprocity(const RunSpec& spec) {
    json j = lrs::load_json_file(spec.config_path);
    lrs::ForwardConfig cfg = lrs::forward_config_from_json(j);
    auto sources_json = lrs::get_field<std::vector<std::vector<double>>>(j, "sources");
    std::vector<lrs::Vec2> sources;
    for (const auto& s : sources_json) {
        if (s.size() != 2) throw lrs::ConfigError("sources entries must be [x, y]");
        sources.push_back({s[0], s[1]});
    }
    std::vector<lrs::Vec2> dirs = lrs::directions_from_json(j, "directions", false);
    if (sources.empty()) throw lrs::ConfigError("sources must be nonempty");

    Timer timer;
    Eigen::MatrixXd grid = lrs::mixed_reciprocity_grid(cfg, sources, dirs);
    double elapsed = timer.ms();

    fs::path out = prepare_out_dir(spec);
    std::ostringstream csv;
    csv << "source_index,direction_index,relative_discrepancy\n";
    for (Eigen::Index a = 0; a < grid.rows(); ++a)
        for (Eigen::Index b = 0; b < grid.cols(); ++b)
            csv << a << ',' << b << ',' << fp17(grid(a, b)) << '\n';
    lrs::write_text_file(out / "reciprocity.csv", csv.str());

    json summary;
    summary["k"] = cfg.k;
    summary["n_pan"] = cfg.n_pan;
    summary["max_discrepancy"] = grid.maxCoeff();
    lrs::write_text_file(out / "summary.json", summary.dump(2) + "\n");
    log_line(spec, "reciprocity check done in " + fp17(elapsed) + " ms, max discrepancy " +
                       fp17(grid.maxCoeff()));
    return 0;
}

int cmd_synth(const RunSpec& spec) {
    json j = lrs::load_json_file(spec.config_path);
    if (!j.contains("profile")) throw lrs::ConfigError("missing field: profile");
    lrs::SurfaceProfile truth = lrs::profile_from_json(j.at("profile"));
    lrs::InverseGeometry geom = lrs::inverse_geometry_from_json(j);
    auto ks = lrs::get_field<std::vector<double>>(j, "wave_numbers");
    std::vector<lrs::Vec2> ds = lrs::directions_from_json(j, "incident_directions", true);
    int n_f = lrs::get_field_or<int>(j, "n_f", 200);
    double delta = lrs::get_field<double>(j, "delta");
    if (ks.empty()) throw lrs::ConfigError("wave_numbers must be nonempty");
    if (n_f < 1) throw lrs::ConfigError("n_f must be >= 1");
    if (delta < 0.0) throw lrs::ConfigError("delta must be >= 0");

    Timer timer;
    lrs::MeasurementSet ms =
        lrs::synthesize_measurements(truth, geom, ks, ds, n_f, delta, spec.seed);
    double elapsed = timer.ms();

    fs::path out = prepare_out_dir(spec);
    lrs::save_measurements(ms, out / "measurements.json", out / "measurements.csv");
    log_line(spec, "synthesized " + std::to_string(ks.size()) + " wave numbers in " +
                       fp17(elapsed) + " ms");
    return 0;
}

int cmd_reconstruct(const RunSpec& spec) {
    json j = lrs::load_json_file(spec.config_path);
    // Relative measurement paths resolve against the working directory.
    fs::path meas_path = lrs::get_field<std::string>(j, "measurements");
    lrs::MeasurementSet ms = lrs::load_measurements(meas_path);

    lrs::ReconstructOptions opt;
    opt.geom = lrs::inverse_geometry_from_json(j);
    opt.M = lrs::get_field_or<int>(j, "M", 20);
    opt.rho_lm = lrs::get_field_or<double>(j, "rho_lm", 0.8);
    opt.tau = lrs::get_field_or<double>(j, "tau", 1.5);
    opt.max_iter_per_k = lrs::get_field_or<int>(j, "max_iter_per_k", 20);
    if (j.contains("initial_coefficients"))
        opt.initial = lrs::get_field<std::vector<double>>(j, "initial_coefficients");
    if (opt.M < 1) throw lrs::ConfigError("M must be >= 1");
    if (opt.rho_lm <= 0.0 || opt.rho_lm >= 1.0) throw lrs::ConfigError("rho_lm must be in (0, 1)");
    if (opt.tau <= 1.0) throw lrs::ConfigError("tau must be > 1");
    bool have_truth = j.contains("truth_profile");
    lrs::SurfaceProfile truth;
    if (have_truth) truth = lrs::profile_from_json(j.at("truth_profile"));

    Timer timer;
    lrs::ReconstructionResult res = lrs::reconstruct(ms, opt);
    double elapsed = timer.ms();

    fs::path out = prepare_out_dir(spec);
    std::ostringstream traj;
    traj << "k,iteration,err,beta,bracket_edge\n";
    for (const auto& t : res.trajectory)
        traj << fp17(t.k) << ',' << t.iteration << ',' << fp17(t.err) << ',' << fp17(t.beta)
             << ',' << (t.bracket_edge ? 1 : 0) << '\n';
    lrs::write_text_file(out / "trajectory.csv", traj.str());

    const int grid = 512;
    json summary;
    json stages = json::array();
    for (const auto& s : res.stages) {
        lrs::SurfaceProfile app = lrs::SurfaceProfile::spline(s.coefficients, opt.geom.R);
        std::ostringstream csv;
        csv << (have_truth ? "x1,h_true,h_app\n" : "x1,h_app\n");
        for (int g = 0; g < grid; ++g) {
            double x = -opt.geom.R + 2.0 * opt.geom.R * (g + 0.5) / grid;
            csv << fp17(x) << ',';
            if (have_truth) csv << fp17(truth.h(x)) << ',';
            csv << fp17(app.h(x)) << '\n';
        }
        std::ostringstream name;
        name << "profile_k" << fp17(s.k) << ".csv";
        lrs::write_text_file(out / name.str(), csv.str());

        json st;
        st["k"] = s.k;
        st["iterations"] = s.iterations;
        st["converged"] = s.converged;
        st["final_err"] = s.final_err;
        st["coefficients"] = s.coefficients;
        if (have_truth) {
            lrs::ProfileError pe = lrs::profile_error(s.coefficients, opt.geom.R, truth);
            st["linf_error"] = pe.linf;
            st["l2_error"] = pe.l2;
        }
        stages.push_back(st);
    }
    summary["stages"] = stages;
    summary["final_coefficients"] = res.coefficients;
    if (have_truth) {
        lrs::ProfileError pe = lrs::profile_error(res.coefficients, opt.geom.R, truth);
        summary["final_linf_error"] = pe.linf;
        summary["final_l2_error"] = pe.l2;
    }
    lrs::write_text_file(out / "summary.json", summary.dump(2) + "\n");
    log_line(spec, "reconstruction done in " + fp17(elapsed) + " ms");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acoustic scattering by a locally perturbed plane: forward and inverse solvers"};
    app.require_subcommand(1);

    RunSpec spec;
    int (*handler)(const RunSpec&) = nullptr;
    for (auto& [name, desc, fn] :
         {std::tuple{"forward", "solve one forward scattering problem", &cmd_forward},
          std::tuple{"convergence", "far-field error vs panel count against the closed form",
                     &cmd_convergence},
          std::tuple{"reciprocity", "mixed reciprocity check over a source/direction grid",
                     &cmd_reciprocity},
          std::tuple{"synth", "generate noisy multi-frequency far-field data", &cmd_synth},
          std::tuple{"reconstruct", "multi-frequency profile reconstruction", &cmd_reconstruct}}) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", spec.config_path, "JSON configuration file")->required();
        sub->add_option("--out", spec.out_dir, "output directory");
        sub->add_option("--seed", spec.seed, "random number generator seed");
        sub->add_flag("--quiet", spec.quiet, "suppress progress output");
        sub->callback([&handler, fn = fn] { handler = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return handler(spec);
    } catch (const lrs::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}
