// The three boundary curves: Gamma_R (perturbed surface part), the lower
// half-circle of radius R, and the auxiliary impedance circle inside it.

#ifndef LRS_GEOMETRY_HPP
#define LRS_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>

#include "lrs/profile.hpp"
#include "lrs/specfun.hpp"

namespace lrs {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 reflect(Vec2 a) { return {a.x, -a.y}; }

enum class CurveLabel { GammaR, LowerArc, AuxCircle };

/// Geometric data at one point of a parameterized curve.
struct CurvePoint {
    Vec2 x;
    Vec2 normal;   // unit; into D_+ on GammaR, outward radial on the circles
    double speed;  // |x'(t)|
};

/// The three curves of the truncated scattering geometry.  Parameter ranges:
/// GammaR by x1 in [-R, R]; LowerArc by angle in [pi, 2*pi]; AuxCircle by
/// angle in [0, 2*pi].  Corners x_A = (-R, 0), x_B = (R, 0).
struct CurveSet {
    SurfaceProfile profile;
    double R = 1.0;
    Vec2 aux_center{0.0, -0.5};
    double aux_radius = 0.1;

    CurveSet(SurfaceProfile prof, double R_, Vec2 aux_c, double aux_r)
        : profile(std::move(prof)), R(R_), aux_center(aux_c), aux_radius(aux_r) {
        validate();
    }

    void validate() const {
        if (R <= 0.0) throw std::invalid_argument("CurveSet: R must be positive");
        if (aux_radius <= 0.0)
            throw std::invalid_argument("CurveSet: aux_radius must be positive");
        // Auxiliary disk strictly inside the lower half-disk.
        if (aux_center.y + aux_radius >= 0.0)
            throw std::invalid_argument("CurveSet: auxiliary disk reaches the surface");
        if (norm(aux_center) + aux_radius >= R)
            throw std::invalid_argument("CurveSet: auxiliary disk reaches the arc");
        // supp(h) strictly inside (-R, R), checked by sampling near the ends.
        for (int i = 0; i <= 200; ++i) {
            double margin = 0.02 * R;
            for (double x1 : {-R + i * margin / 200.0, R - i * margin / 200.0}) {
                Jet2 j = profile.eval(x1);
                if (j.v != 0.0 || j.d1 != 0.0)
                    throw std::invalid_argument(
                        "CurveSet: profile support touches the truncation radius");
            }
        }
    }

    std::pair<double, double> param_range(CurveLabel label) const {
        switch (label) {
            case CurveLabel::GammaR: return {-R, R};
            case CurveLabel::LowerArc: return {pi, 2.0 * pi};
            case CurveLabel::AuxCircle: return {0.0, 2.0 * pi};
        }
        throw std::logic_error("unreachable");
    }

    /// nu(t) . x''(t), needed by the diagonal limit of the K' kernel.
    double nu_dot_second(CurveLabel label, double t) const {
        switch (label) {
            case CurveLabel::GammaR: {
                Jet2 j = profile.eval(t);
                return j.d2 / std::sqrt(1.0 + j.d1 * j.d1);
            }
            case CurveLabel::LowerArc: return -R;
            case CurveLabel::AuxCircle: return -aux_radius;
        }
        throw std::logic_error("unreachable");
    }

    CurvePoint at(CurveLabel label, double t) const {
        switch (label) {
            case CurveLabel::GammaR: {
                Jet2 j = profile.eval(t);
                double s = std::sqrt(1.0 + j.d1 * j.d1);
                return {{t, j.v}, {-j.d1 / s, 1.0 / s}, s};
            }
            case CurveLabel::LowerArc: {
                double c = std::cos(t), s = std::sin(t);
                return {{R * c, R * s}, {c, s}, R};
            }
            case CurveLabel::AuxCircle: {
                double c = std::cos(t), s = std::sin(t);
                return {{aux_center.x + aux_radius * c, aux_center.y + aux_radius * s},
                        {c, s},
                        aux_radius};
            }
        }
        throw std::logic_error("unreachable");
    }
};

}  // namespace lrs

#endif  // LRS_GEOMETRY_HPP
