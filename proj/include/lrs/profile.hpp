// Surface profiles h describing the local perturbation of the plane x2 = 0,
// with first and second derivatives and compact support.  Built-in closed
// forms plus spline-parameterized profiles over the quartic B-spline basis.

#ifndef LRS_PROFILE_HPP
#define LRS_PROFILE_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrs {

/// Value, first and second derivative of a scalar function at a point.
struct Jet2 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Centered quartic B-spline, support (-2.5, 2.5), C^3:
/// phi(t) = sum_{j=0}^{5} ((-1)^j / 4!) C(5,j) (t + 2.5 - j)_+^4, phi(0) = 115/192.
inline Jet2 quartic_bspline(double t) {
    static constexpr double binom[6] = {1, 5, 10, 10, 5, 1};
    Jet2 out;
    if (t <= -2.5 || t >= 2.5) return out;
    for (int j = 0; j < 6; ++j) {
        double u = t + 2.5 - j;
        if (u <= 0.0) break;
        double s = (j % 2 == 0 ? 1.0 : -1.0) * binom[j] / 24.0;
        double u2 = u * u;
        out.v += s * u2 * u2;
        out.d1 += s * 4.0 * u2 * u;
        out.d2 += s * 12.0 * u2;
    }
    return out;
}

/// Basis functions phi_{i,M} spanning the spline space on (-R, R):
/// spacing = 2R/(M+5), centers t_i = (i+2)·spacing − R for i = 1..M,
/// phi_{i,M}(t) = phi((t − t_i)/spacing).  Every element is supported
/// strictly inside (−R, R).
struct SplineBasis {
    int M = 0;
    double R = 0.0;
    double spacing = 0.0;

    SplineBasis(int M_, double R_) : M(M_), R(R_) {
        if (M < 1) throw std::invalid_argument("SplineBasis: M must be >= 1");
        if (R <= 0.0) throw std::invalid_argument("SplineBasis: R must be positive");
        spacing = 2.0 * R / (M + 5);
    }

    double center(int i) const { return (i + 3) * spacing - R; }  // i = 0..M-1

    Jet2 eval(int i, double t) const {
        Jet2 j = quartic_bspline((t - center(i)) / spacing);
        j.d1 /= spacing;
        j.d2 /= spacing * spacing;
        return j;
    }
};

enum class ProfileKind { Flat, Example1, Example2, Example3, SineBump, Spline };

inline ProfileKind profile_kind_from_string(const std::string& s) {
    if (s == "flat") return ProfileKind::Flat;
    if (s == "example1") return ProfileKind::Example1;
    if (s == "example2") return ProfileKind::Example2;
    if (s == "example3") return ProfileKind::Example3;
    if (s == "sine_bump") return ProfileKind::SineBump;
    if (s == "spline") return ProfileKind::Spline;
    throw std::invalid_argument("unknown profile kind: " + s);
}

inline std::string profile_kind_to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::Flat: return "flat";
        case ProfileKind::Example1: return "example1";
        case ProfileKind::Example2: return "example2";
        case ProfileKind::Example3: return "example3";
        case ProfileKind::SineBump: return "sine_bump";
        case ProfileKind::Spline: return "spline";
    }
    throw std::logic_error("unreachable");
}

namespace detail {

/// Bump factor exp(16/(25 t^2 - 16)) for |t| < 4/5, 0 otherwise (all
/// derivatives vanish at |t| = 4/5).
inline Jet2 bump45(double t) {
    Jet2 out;
    if (std::abs(t) >= 0.8) return out;
    double u = 25.0 * t * t - 16.0;
    double g1 = -800.0 * t / (u * u);
    double g2 = -800.0 / (u * u) + 80000.0 * t * t / (u * u * u);
    double b = std::exp(16.0 / u);
    out.v = b;
    out.d1 = b * g1;
    out.d2 = b * (g1 * g1 + g2);
    return out;
}

/// Product of two jets.
inline Jet2 jmul(const Jet2& a, const Jet2& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

inline Jet2 jsin(double w, double t) {  // sin(w t)
    return {std::sin(w * t), w * std::cos(w * t), -w * w * std::sin(w * t)};
}

inline Jet2 jcos(double w, double t) {  // cos(w t)
    return {std::cos(w * t), -w * std::sin(w * t), -w * w * std::cos(w * t)};
}

}  // namespace detail

/// The perturbation h with supp(h) contained in (-support_radius, support_radius).
struct SurfaceProfile {
    ProfileKind kind = ProfileKind::Flat;
    double support_radius = 1.0;
    std::vector<double> coefficients;  // spline kind only
    int basis_count = 0;               // spline kind only

    static SurfaceProfile flat(double R = 1.0) { return {ProfileKind::Flat, R, {}, 0}; }

    static SurfaceProfile builtin(ProfileKind k, double R = 1.0) {
        if (k == ProfileKind::Spline)
            throw std::invalid_argument("SurfaceProfile::builtin: use spline() for spline kind");
        return {k, R, {}, 0};
    }

    static SurfaceProfile spline(std::vector<double> coeffs, double R = 1.0) {
        SurfaceProfile p;
        p.kind = ProfileKind::Spline;
        p.support_radius = R;
        p.basis_count = static_cast<int>(coeffs.size());
        p.coefficients = std::move(coeffs);
        if (p.basis_count < 1)
            throw std::invalid_argument("SurfaceProfile::spline: empty coefficient vector");
        return p;
    }

    Jet2 eval(double x) const {
        using namespace detail;
        switch (kind) {
            case ProfileKind::Flat:
                return {};
            case ProfileKind::SineBump:
                return jmul(bump45(x), jsin(4.0 * pi_w, x));
            case ProfileKind::Example1: {
                Jet2 a = quartic_bspline((x + 0.2) / 0.3);
                Jet2 b = quartic_bspline((x - 0.3) / 0.2);
                return {a.v - 0.8 * b.v, a.d1 / 0.3 - 0.8 * b.d1 / 0.2,
                        a.d2 / 0.09 - 0.8 * b.d2 / 0.04};
            }
            case ProfileKind::Example2: {
                Jet2 j = jmul(bump45(x), jcos(4.0 * pi_w, x));
                return {0.5 * j.v, 0.5 * j.d1, 0.5 * j.d2};
            }
            case ProfileKind::Example3: {
                Jet2 s = jsin(16.0 * pi_w, x);
                Jet2 mod = {0.5 + 0.1 * s.v, 0.1 * s.d1, 0.1 * s.d2};
                return jmul(jmul(bump45(x), mod), jsin(pi_w, x));
            }
            case ProfileKind::Spline: {
                SplineBasis basis(basis_count, support_radius);
                Jet2 out;
                for (int i = 0; i < basis_count; ++i) {
                    Jet2 j = basis.eval(i, x);
                    out.v += coefficients[i] * j.v;
                    out.d1 += coefficients[i] * j.d1;
                    out.d2 += coefficients[i] * j.d2;
                }
                return out;
            }
        }
        throw std::logic_error("unreachable");
    }

    double h(double x) const { return eval(x).v; }
    double dh(double x) const { return eval(x).d1; }

private:
    static constexpr double pi_w = 3.141592653589793238462643383279502884;
};

}  // namespace lrs

#endif  // LRS_PROFILE_HPP
