// Special functions and Gauss-Legendre quadrature used by the layer-potential
// kernels: Bessel/Hankel functions of orders 0 and 1 in double precision.
//
// J0, J1, Y0, Y1 follow the classic Cephes rational approximations
// (Stephen L. Moshier, Cephes Math Library Release 2.8), split at x = 5
// with Hankel-type modulus/phase expansions above.

#ifndef LRS_SPECFUN_HPP
#define LRS_SPECFUN_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lrs {

using complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;

namespace detail {

inline double polevl(double x, const double* c, int n) {
    double r = c[0];
    for (int i = 1; i <= n; ++i) r = r * x + c[i];
    return r;
}

// Same as polevl with an implicit leading coefficient of 1.
inline double p1evl(double x, const double* c, int n) {
    double r = x + c[0];
    for (int i = 1; i < n; ++i) r = r * x + c[i];
    return r;
}

inline constexpr double b0_PP[7] = {
    7.96936729297347051624e-4, 8.28352392107440799803e-2, 1.23953371646414299388e0,
    5.44725003058768775090e0,  8.74716500199817011941e0,  5.30324038235394892183e0,
    9.99999999999999997821e-1,
};
inline constexpr double b0_PQ[7] = {
    9.24408810558863637013e-4, 8.56288474354474431428e-2, 1.25352743901058953537e0,
    5.47097740330417105182e0,  8.76190883237069594232e0,  5.30605288235394617618e0,
    1.00000000000000000218e0,
};
inline constexpr double b0_QP[8] = {
    -1.13663838898469149931e-2, -1.28252718670509318512e0, -1.95539544257735972385e1,
    -9.32060152123768231369e1,  -1.77681167980488050595e2, -1.47077505154951170175e2,
    -5.14105326766599330220e1,  -6.05014350600728481186e0,
};
inline constexpr double b0_QQ[7] = {
    6.43178256118178023184e1, 8.56430025976980587198e2, 3.88240183605401609683e3,
    7.24046774195652478189e3, 5.93072701187316984827e3, 2.06209331660327847417e3,
    2.42005740240291393179e2,
};
inline constexpr double b0_YP[8] = {
    1.55924367855235737965e4,  -1.46639295903971606143e7, 5.43526477051876500413e9,
    -9.82136065717911466409e11, 8.75906394395366999549e13, -3.46628303384729719441e15,
    4.42733268572569800351e16, -1.84950800436986690637e16,
};
inline constexpr double b0_YQ[7] = {
    1.04128353664259848412e3, 6.26107330137134956842e5, 2.68919633393814121987e8,
    8.64002487103935000337e10, 2.02979612750105546709e13, 3.17157752842975028269e15,
    2.50596256172653059228e17,
};
inline constexpr double b0_DR1 = 5.78318596294678452118e0;
inline constexpr double b0_DR2 = 3.04712623436620863991e1;
inline constexpr double b0_RP[4] = {
    -4.79443220978201773821e9, 1.95617491946556577543e12,
    -2.49248344360967716204e14, 9.70862251047306323952e15,
};
inline constexpr double b0_RQ[8] = {
    4.99563147152651017219e2, 1.73785401676374683123e5, 4.84409658339962045305e7,
    1.11855537045356834862e10, 2.11277520115489217587e12, 3.10518229857422583814e14,
    3.18121955943204943306e16, 1.71086294081043136091e18,
};

inline constexpr double b1_RP[4] = {
    -8.99971225705559398224e8, 4.52228297998194034323e11,
    -7.27494245221818276015e13, 3.68295732863852883286e15,
};
inline constexpr double b1_RQ[8] = {
    6.20836478118054335476e2, 2.56987256757748830383e5, 8.35146791431949253037e7,
    2.21511595479792499675e10, 4.74914122079991414898e12, 7.84369607876235854894e14,
    8.95222336184627338078e16, 5.32278620332680085395e18,
};
inline constexpr double b1_PP[7] = {
    7.62125616208173112003e-4, 7.31397056940917570436e-2, 1.12719608129684925192e0,
    5.11207951146807644818e0,  8.42404590141772420927e0,  5.21451598682361504063e0,
    1.00000000000000000254e0,
};
inline constexpr double b1_PQ[7] = {
    5.71323128072548699714e-4, 6.88455908754495404082e-2, 1.10514232634061696926e0,
    5.07386386128601488557e0,  8.39985554327604159757e0,  5.20982848682361821619e0,
    9.99999999999999997461e-1,
};
inline constexpr double b1_QP[8] = {
    5.10862594750176621635e-2, 4.98213872951233449420e0, 7.58238284132545283818e1,
    3.66779609360150777800e2,  7.10856304998926107277e2, 5.97489612400613639965e2,
    2.11688757100572135698e2,  2.52070205858023719784e1,
};
inline constexpr double b1_QQ[7] = {
    7.42373277035675149943e1, 1.05644886038262816351e3, 4.98641058337653607651e3,
    9.56231892404756170795e3, 7.99704160447350683650e3, 2.82619278517639096600e3,
    3.36093607810698293419e2,
};
inline constexpr double b1_YP[6] = {
    1.26320474790178026440e9, -6.47355876379160291031e11, 1.14509511541823727583e14,
    -8.12770255501325109621e15, 2.02439475713594898196e17, -7.78877196265950026825e17,
};
inline constexpr double b1_YQ[8] = {
    5.94301592346128195359e2, 2.35564092943068577943e5, 7.34811944459721705660e7,
    1.87601316108706159478e10, 3.88231277496238566008e12, 6.20557727146953693363e14,
    6.87141087355300489866e16, 3.97270608116560655612e18,
};
inline constexpr double b1_Z1 = 1.46819706421238932572e1;
inline constexpr double b1_Z2 = 4.92184563216946036703e1;

inline const double sq2opi = std::sqrt(2.0 / pi);

inline double j0_impl(double x) {
    if (x <= 5.0) {
        double z = x * x;
        if (x < 1.0e-5) return 1.0 - z / 4.0;
        double p = (z - b0_DR1) * (z - b0_DR2);
        return p * polevl(z, b0_RP, 3) / p1evl(z, b0_RQ, 8);
    }
    double w = 5.0 / x;
    double z = 25.0 / (x * x);
    double p = polevl(z, b0_PP, 6) / polevl(z, b0_PQ, 6);
    double q = polevl(z, b0_QP, 7) / p1evl(z, b0_QQ, 7);
    double xn = x - pi / 4.0;
    return (p * std::cos(xn) - w * q * std::sin(xn)) * sq2opi / std::sqrt(x);
}

inline double y0_impl(double x) {
    if (x <= 5.0) {
        double z = x * x;
        double w = polevl(z, b0_YP, 7) / p1evl(z, b0_YQ, 7);
        return w + (2.0 / pi) * std::log(x) * j0_impl(x);
    }
    double w = 5.0 / x;
    double z = 25.0 / (x * x);
    double p = polevl(z, b0_PP, 6) / polevl(z, b0_PQ, 6);
    double q = polevl(z, b0_QP, 7) / p1evl(z, b0_QQ, 7);
    double xn = x - pi / 4.0;
    return (p * std::sin(xn) + w * q * std::cos(xn)) * sq2opi / std::sqrt(x);
}

inline double j1_impl(double x) {
    if (x <= 5.0) {
        double z = x * x;
        double w = polevl(z, b1_RP, 3) / p1evl(z, b1_RQ, 8);
        return w * x * (z - b1_Z1) * (z - b1_Z2);
    }
    double w = 5.0 / x;
    double z = w * w;
    double p = polevl(z, b1_PP, 6) / polevl(z, b1_PQ, 6);
    double q = polevl(z, b1_QP, 7) / p1evl(z, b1_QQ, 7);
    double xn = x - 3.0 * pi / 4.0;
    return (p * std::cos(xn) - w * q * std::sin(xn)) * sq2opi / std::sqrt(x);
}

inline double y1_impl(double x) {
    if (x <= 5.0) {
        double z = x * x;
        double w = x * (polevl(z, b1_YP, 5) / p1evl(z, b1_YQ, 8));
        return w + (2.0 / pi) * (j1_impl(x) * std::log(x) - 1.0 / x);
    }
    double w = 5.0 / x;
    double z = w * w;
    double p = polevl(z, b1_PP, 6) / polevl(z, b1_PQ, 6);
    double q = polevl(z, b1_QP, 7) / p1evl(z, b1_QQ, 7);
    double xn = x - 3.0 * pi / 4.0;
    return (p * std::sin(xn) + w * q * std::cos(xn)) * sq2opi / std::sqrt(x);
}

inline void check_positive_finite(double x, const char* who) {
    if (!std::isfinite(x) || x <= 0.0)
        throw std::domain_error(std::string(who) + ": argument must be positive and finite, got " +
                                std::to_string(x));
}

}  // namespace detail

/// (J0(x), J1(x)) for x > 0.
inline std::pair<double, double> bessel_j0j1(double x) {
    detail::check_positive_finite(x, "bessel_j0j1");
    return {detail::j0_impl(x), detail::j1_impl(x)};
}

/// (Y0(x), Y1(x)) for x > 0.
inline std::pair<double, double> bessel_y0y1(double x) {
    detail::check_positive_finite(x, "bessel_y0y1");
    return {detail::y0_impl(x), detail::y1_impl(x)};
}

/// H^(1)_n(x) = J_n(x) + i Y_n(x), n in {0, 1}, x > 0.
inline complex hankel1(int order, double x) {
    detail::check_positive_finite(x, "hankel1");
    switch (order) {
        case 0: return {detail::j0_impl(x), detail::y0_impl(x)};
        case 1: return {detail::j1_impl(x), detail::y1_impl(x)};
        default: throw std::domain_error("hankel1: only orders 0 and 1 are supported");
    }
}

/// Both Hankel functions at once; saves duplicate modulus/phase work in kernels.
struct Hankel01 {
    complex h0;
    complex h1;
};
inline Hankel01 hankel1_01(double x) {
    detail::check_positive_finite(x, "hankel1_01");
    return {{detail::j0_impl(x), detail::y0_impl(x)}, {detail::j1_impl(x), detail::y1_impl(x)}};
}

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Legendre polynomial values P_0..P_n at t (ascending degree).
inline void legendre_values(double t, int n, double* out) {
    out[0] = 1.0;
    if (n == 0) return;
    out[1] = t;
    for (int m = 1; m < n; ++m)
        out[m + 1] = ((2 * m + 1) * t * out[m] - m * out[m - 1]) / (m + 1);
}

inline QuadratureRule gauss_legendre(int order) {
    if (order < 1 || order > 64)
        throw std::invalid_argument("gauss_legendre: order must be in [1, 64]");
    QuadratureRule rule;
    rule.order = order;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int m = 1; m < n; ++m) {
                double p2 = ((2 * m + 1) * x * p1 - m * p0) / (m + 1);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one extra polishing step
                if (it > 2) break;
            }
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace lrs

#endif  // LRS_SPECFUN_HPP
