// Pointwise kernels of the layer potentials: the fundamental solution
// Phi_k(x,y) = (i/4) H0^(1)(k|x-y|), its normal-derivative kernel K', the
// reflected kernel K'^re, and splits into smooth + log|x-y| * coefficient
// for product integration near the diagonal.

#ifndef LRS_KERNELS_HPP
#define LRS_KERNELS_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include "lrs/geometry.hpp"
#include "lrs/specfun.hpp"

namespace lrs {

struct WaveContext {
    double k = 1.0;        // wave number
    double rho_imp = 1.0;  // impedance constant on the auxiliary circle

    WaveContext(double k_, double rho) : k(k_), rho_imp(rho) {
        if (k <= 0.0) throw std::invalid_argument("WaveContext: k must be positive");
        if (rho_imp <= 0.0)
            throw std::invalid_argument("WaveContext: rho_imp must be positive");
    }

    /// k * aux_radius below the first zero of J0 keeps the auxiliary disk
    /// free of interior resonances.
    void check_aux_radius(double aux_radius) const {
        if (k * aux_radius >= 2.404825557695773)
            throw std::invalid_argument(
                "WaveContext: k * aux_radius must stay below the first zero of J0");
    }
};

/// Fundamental solution Phi_k(x, y).
inline complex phi_k(Vec2 x, Vec2 y, double k) {
    double r = norm(x - y);
    if (r == 0.0) throw std::domain_error("phi_k: x == y");
    complex h0 = hankel1(0, k * r);
    return complex(0.0, 0.25) * h0;
}

/// K'(x, y) = dPhi_k(x,y)/dnu(x) = -(ik/4) H1^(1)(kr) (nu(x) . (x-y)) / r.
inline complex kernel_kprime(Vec2 x, Vec2 nu_x, Vec2 y, double k) {
    double r = norm(x - y);
    if (r == 0.0) throw std::domain_error("kernel_kprime: x == y");
    complex h1 = hankel1(1, k * r);
    return complex(0.0, -0.25 * k) * h1 * (dot(nu_x, x - y) / r);
}

/// K'^re(x, y): K' evaluated at the mirror image x^re = (x1, -x2) with the
/// outward radial normal of the full circle |x| = R at x^re.
inline complex kernel_kprime_reflected(Vec2 x, Vec2 y, double k) {
    Vec2 xre = reflect(x);
    double R = norm(xre);
    if (R == 0.0) throw std::domain_error("kernel_kprime_reflected: x at origin");
    return kernel_kprime(xre, (1.0 / R) * xre, y, k);
}

/// A kernel value written as smooth + log|x - y| * logcoef; both parts extend
/// continuously to x = y.
struct KernelSplit {
    complex smooth;
    complex logcoef;
};

/// Split of K' for x != y on the same smooth curve:
/// logcoef = (k/(2 pi)) J1(kr) (nu(x).(x-y))/r  (from the Y1 log series),
/// smooth  = K' - log r * logcoef.
inline KernelSplit kprime_split(Vec2 x, Vec2 nu_x, Vec2 y, double k) {
    double r = norm(x - y);
    if (r == 0.0) throw std::domain_error("kprime_split: use kprime_diagonal_smooth");
    double proj = dot(nu_x, x - y) / r;
    auto jb = bessel_j0j1(k * r);
    complex full = kernel_kprime(x, nu_x, y, k);
    complex logcoef = k / (2.0 * pi) * jb.second * proj;
    return {full - std::log(r) * logcoef, logcoef};
}

/// Diagonal limit of the smooth part of K': (nu . x'')/(4 pi |x'|^2), where
/// nu_dot_xpp = nu(t) . x''(t) and speed = |x'(t)|.
inline complex kprime_diagonal_smooth(double nu_dot_xpp, double speed) {
    return nu_dot_xpp / (4.0 * pi * speed * speed);
}

/// Split of the single-layer kernel Phi_k:
/// logcoef = -(1/(2 pi)) J0(kr), smooth = Phi_k - log r * logcoef.
inline KernelSplit single_split(Vec2 x, Vec2 y, double k) {
    double r = norm(x - y);
    if (r == 0.0) throw std::domain_error("single_split: use single_diagonal_smooth");
    auto [j0, j1] = bessel_j0j1(k * r);
    (void)j1;
    complex full = phi_k(x, y, k);
    complex logcoef = -j0 / (2.0 * pi);
    return {full - std::log(r) * logcoef, logcoef};
}

/// Diagonal limit of the smooth part of Phi_k.
inline complex single_diagonal_smooth(double k) {
    return complex(-(std::log(k / 2.0) + euler_gamma) / (2.0 * pi), 0.25);
}

/// Split of K'^re for x, y on the lower arc (the image point x^re lies on the
/// same circle, so the kernel has a log singularity as x, y approach a
/// corner together).  r in the split is |x^re - y|.
inline KernelSplit kprime_reflected_split(Vec2 x, Vec2 y, double k) {
    Vec2 xre = reflect(x);
    double R = norm(xre);
    Vec2 nu = (1.0 / R) * xre;
    double r = norm(xre - y);
    if (r == 0.0) throw std::domain_error("kprime_reflected_split: coincident image point");
    double proj = dot(nu, xre - y) / r;
    auto jb = bessel_j0j1(k * r);
    complex full = kernel_kprime(xre, nu, y, k);
    complex logcoef = k / (2.0 * pi) * jb.second * proj;
    return {full - std::log(r) * logcoef, logcoef};
}

}  // namespace lrs

#endif  // LRS_KERNELS_HPP
