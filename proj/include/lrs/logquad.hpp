// Product-integration weights for logarithmically singular panel integrals.
//
// Given a Gauss-Legendre rule on [-1, 1] and a point tau0 (inside or outside
// the interval), log_weights returns weights WL_j such that
//
//     integral_{-1}^{1} p(t) * ln|t - tau0| dt  =  sum_j WL_j * p(t_j)
//
// exactly for polynomials p of degree <= order-1.  The construction expands
// p in Legendre polynomials through the plain Gauss weights and uses the
// analytic moments c_n = integral P_n(t) ln|t - tau0| dt, which reduce to
// Legendre functions of the second kind:
//
//     c_0 = (1+tau0) ln|1+tau0| + (1-tau0) ln|1-tau0| - 2
//     c_n = (2/(2n+1)) (Q_{n+1}(tau0) - Q_{n-1}(tau0)),  n >= 1.

#ifndef LRS_LOGQUAD_HPP
#define LRS_LOGQUAD_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lrs/specfun.hpp"

namespace lrs {
namespace detail {

// Q_0..Q_n at x, |x| != 1.  Upward recursion inside [-1,1] (stable there),
// Miller-style downward recursion normalized by Q_0 outside (upward is
// unstable outside because P_n dominates).
inline void legendre_q(double x, int n, double* out) {
    double q0 = 0.5 * std::log(std::abs((1.0 + x) / (1.0 - x)));
    out[0] = q0;
    if (n == 0) return;
    if (std::abs(x) <= 1.0) {
        out[1] = x * q0 - 1.0;
        for (int m = 1; m < n; ++m)
            out[m + 1] = ((2 * m + 1) * x * out[m] - m * out[m - 1]) / (m + 1);
        return;
    }
    double xi = std::log(std::abs(x) + std::sqrt(x * x - 1.0));
    int pad = std::clamp(static_cast<int>(std::ceil(40.0 / xi)), 30, 20000);
    int start = n + pad;
    double fp = 0.0, f = 1.0;
    std::vector<double> buf(n + 1);
    for (int m = start; m >= 1; --m) {
        double fm = ((2 * m + 1) * x * f - (m + 1) * fp) / m;
        fp = f;
        f = fm;
        if (m - 1 <= n) buf[m - 1] = f;
        if (std::abs(f) > 1e280) {
            double inv = 1.0 / f;
            fp *= inv;
            f = 1.0;
            for (int j = m - 1; j <= n; ++j)
                if (j >= 0 && j < static_cast<int>(buf.size())) buf[j] *= inv;
        }
    }
    double scale = q0 / buf[0];
    for (int m = 1; m <= n; ++m) out[m] = buf[m] * scale;
}

}  // namespace detail

/// Moments c_n = integral_{-1}^{1} P_n(t) ln|t - tau0| dt, n = 0..nmax.
inline std::vector<double> log_legendre_moments(double tau0, int nmax) {
    // The moments are continuous at tau0 = +-1 but the Q recursion is not
    // evaluable there; nudge an exact endpoint hit inward.
    if (tau0 == 1.0 || tau0 == -1.0) tau0 = std::copysign(1.0 - 1e-14, tau0);
    std::vector<double> c(nmax + 1);
    auto xlogx = [](double u) { return u == 0.0 ? 0.0 : u * std::log(std::abs(u)); };
    c[0] = xlogx(1.0 + tau0) + xlogx(1.0 - tau0) - 2.0;
    if (nmax == 0) return c;
    std::vector<double> q(nmax + 2);
    detail::legendre_q(tau0, nmax + 1, q.data());
    for (int n = 1; n <= nmax; ++n) c[n] = 2.0 / (2 * n + 1) * (q[n + 1] - q[n - 1]);
    return c;
}

/// Weights for integral p(t) ln|t - tau0| dt against values at the rule's nodes.
inline std::vector<double> log_weights(const QuadratureRule& rule, double tau0) {
    const int n = rule.order;
    std::vector<double> c = log_legendre_moments(tau0, n - 1);
    std::vector<double> wl(n);
    std::vector<double> p(n);
    for (int j = 0; j < n; ++j) {
        legendre_values(rule.nodes[j], n - 1, p.data());
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += (2 * m + 1) * 0.5 * c[m] * p[m];
        wl[j] = rule.weights[j] * s;
    }
    return wl;
}

}  // namespace lrs

#endif  // LRS_LOGQUAD_HPP
