// JSON configuration parsing and CSV emission for the command-line tools.
// All floating-point output uses 17 significant digits so values round-trip.

#ifndef LRS_IO_HPP
#define LRS_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lrs/inverse.hpp"

namespace lrs {

using json = nlohmann::json;

/// Raised for malformed or inconsistent configuration input (exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string fp17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return j;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << text;
}

template <typename T>
T get_field(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("missing field: " + key);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("field '" + key + "': " + e.what());
    }
}

template <typename T>
T get_field_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    return get_field<T>(j, key);
}

inline Vec2 vec2_from_json(const json& j, const std::string& key) {
    auto arr = get_field<std::vector<double>>(j, key);
    if (arr.size() != 2) throw ConfigError("field '" + key + "' must be [x, y]");
    return {arr[0], arr[1]};
}

inline SurfaceProfile profile_from_json(const json& j) {
    std::string kind = get_field<std::string>(j, "kind");
    double R = get_field_or<double>(j, "R", 1.0);
    ProfileKind pk;
    try {
        pk = profile_kind_from_string(kind);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (pk == ProfileKind::Spline) {
        auto coeffs = get_field<std::vector<double>>(j, "coefficients");
        if (coeffs.empty()) throw ConfigError("spline profile needs nonempty 'coefficients'");
        return SurfaceProfile::spline(std::move(coeffs), R);
    }
    if (pk == ProfileKind::Flat) return SurfaceProfile::flat(R);
    return SurfaceProfile::builtin(pk, R);
}

inline json profile_to_json(const SurfaceProfile& p) {
    json j;
    j["kind"] = profile_kind_to_string(p.kind);
    j["R"] = p.support_radius;
    if (p.kind == ProfileKind::Spline) j["coefficients"] = p.coefficients;
    return j;
}

/// Shared geometry block of every command config.
inline void read_geometry(const json& j, SurfaceProfile& profile, double& R, Vec2& aux_center,
                          double& aux_radius) {
    if (!j.contains("profile")) throw ConfigError("missing field: profile");
    profile = profile_from_json(j.at("profile"));
    R = get_field_or<double>(j, "R", 1.0);
    aux_center = j.contains("aux_center") ? vec2_from_json(j, "aux_center") : Vec2{0.0, -0.5};
    aux_radius = get_field_or<double>(j, "aux_radius", 0.1);
}

inline ForwardConfig forward_config_from_json(const json& j) {
    ForwardConfig cfg;
    read_geometry(j, cfg.profile, cfg.R, cfg.aux_center, cfg.aux_radius);
    cfg.k = get_field<double>(j, "k");
    cfg.rho_imp = get_field_or<double>(j, "rho_imp", 1.0);
    cfg.n_pan = get_field_or<int>(j, "n_pan", 10);
    cfg.n_sub = get_field_or<int>(j, "n_sub", 30);
    std::string variant = get_field_or<std::string>(j, "variant", "three-curve");
    if (variant == "three-curve")
        cfg.variant = SystemVariant::ThreeCurve;
    else if (variant == "two-curve")
        cfg.variant = SystemVariant::TwoCurve;
    else
        throw ConfigError("variant must be 'three-curve' or 'two-curve'");
    if (!j.contains("incidence")) throw ConfigError("missing field: incidence");
    const json& inc = j.at("incidence");
    std::string type = get_field<std::string>(inc, "type");
    if (type == "plane")
        cfg.incidence = Incidence::plane(get_field<double>(inc, "theta"));
    else if (type == "point")
        cfg.incidence = Incidence::point(vec2_from_json(inc, "source"));
    else
        throw ConfigError("incidence type must be 'plane' or 'point'");
    if (cfg.k <= 0.0) throw ConfigError("k must be positive");
    if (cfg.n_pan < 4) throw ConfigError("n_pan must be >= 4");
    if (cfg.n_sub < 0) throw ConfigError("n_sub must be >= 0");
    return cfg;
}

inline InverseGeometry inverse_geometry_from_json(const json& j) {
    InverseGeometry g;
    g.R = get_field_or<double>(j, "R", 1.0);
    g.aux_center = j.contains("aux_center") ? vec2_from_json(j, "aux_center") : Vec2{0.0, -0.5};
    g.aux_radius = get_field_or<double>(j, "aux_radius", 0.1);
    g.n_sub = get_field_or<int>(j, "n_sub", 30);
    return g;
}

inline std::vector<Vec2> directions_from_json(const json& j, const std::string& key,
                                              bool lower_half) {
    if (!j.contains(key)) throw ConfigError("missing field: " + key);
    std::vector<Vec2> out;
    for (const json& e : j.at(key)) {
        auto arr = e.get<std::vector<double>>();
        if (arr.size() != 2) throw ConfigError(key + " entries must be [x, y]");
        Vec2 d{arr[0], arr[1]};
        if (std::abs(norm(d) - 1.0) > 1e-9) throw ConfigError(key + " entries must be unit vectors");
        if (lower_half ? d.y >= 0.0 : d.y <= 0.0)
            throw ConfigError(key + " entries in the wrong half plane");
        out.push_back(d);
    }
    if (out.empty()) throw ConfigError(key + " must be nonempty");
    return out;
}

/// Measurement set serialization: metadata JSON plus a CSV of samples with
/// columns (k, direction_index, observation_index, re, im).
inline void save_measurements(const MeasurementSet& ms, const std::filesystem::path& json_path,
                              const std::filesystem::path& csv_path) {
    json meta;
    meta["wave_numbers"] = ms.wave_numbers;
    json dirs = json::array();
    for (Vec2 d : ms.incident_directions) dirs.push_back({d.x, d.y});
    meta["incident_directions"] = dirs;
    meta["n_f"] = ms.n_f();
    meta["delta"] = ms.delta;
    meta["samples_csv"] = csv_path.filename().string();
    write_text_file(json_path, meta.dump(2) + "\n");

    std::ostringstream csv;
    csv << "k,direction_index,observation_index,re,im\n";
    for (size_t m = 0; m < ms.wave_numbers.size(); ++m)
        for (int l = 0; l < ms.n_d(); ++l)
            for (int jx = 0; jx < ms.n_f(); ++jx)
                csv << fp17(ms.wave_numbers[m]) << ',' << l << ',' << jx << ','
                    << fp17(ms.data[m](jx, l).real()) << ',' << fp17(ms.data[m](jx, l).imag())
                    << '\n';
    write_text_file(csv_path, csv.str());
}

inline MeasurementSet load_measurements(const std::filesystem::path& json_path) {
    json meta = load_json_file(json_path.string());
    MeasurementSet ms;
    ms.wave_numbers = get_field<std::vector<double>>(meta, "wave_numbers");
    for (const json& e : meta.at("incident_directions")) {
        auto arr = e.get<std::vector<double>>();
        if (arr.size() != 2) throw ConfigError("incident_directions entries must be [x, y]");
        ms.incident_directions.push_back({arr[0], arr[1]});
    }
    int n_f = get_field<int>(meta, "n_f");
    ms.observation_directions = upper_half_directions(n_f);
    ms.delta = get_field<double>(meta, "delta");
    std::filesystem::path csv_path =
        json_path.parent_path() / get_field<std::string>(meta, "samples_csv");
    std::ifstream in(csv_path);
    if (!in) throw ConfigError("cannot open file: " + csv_path.string());
    for (size_t m = 0; m < ms.wave_numbers.size(); ++m)
        ms.data.emplace_back(CMat::Zero(n_f, static_cast<Eigen::Index>(ms.incident_directions.size())));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double k, re, im;
        int l, jx;
        if (std::sscanf(line.c_str(), "%lf,%d,%d,%lf,%lf", &k, &l, &jx, &re, &im) != 5)
            throw ConfigError("malformed sample row: " + line);
        size_t m = 0;
        while (m < ms.wave_numbers.size() && ms.wave_numbers[m] != k) ++m;
        if (m == ms.wave_numbers.size() || l < 0 || l >= ms.n_d() || jx < 0 || jx >= n_f)
            throw ConfigError("sample row out of range: " + line);
        ms.data[m](jx, l) = complex(re, im);
    }
    ms.validate();
    return ms;
}

}  // namespace lrs

#endif  // LRS_IO_HPP
