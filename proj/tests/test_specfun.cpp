#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "lrs/logquad.hpp"
#include "lrs/specfun.hpp"

namespace {

// Power-series / logarithmic-series oracles, summed in long double.
// Usable for x up to ~12 where cancellation still leaves ~1e-15 accuracy.
long double j0_series(long double x) {
    long double q = x * x / 4.0L, term = 1.0L, sum = 1.0L;
    for (int m = 1; m < 80; ++m) {
        term *= -q / (static_cast<long double>(m) * m);
        sum += term;
    }
    return sum;
}

long double j1_series(long double x) {
    long double q = x * x / 4.0L, term = x / 2.0L, sum = term;
    for (int m = 1; m < 80; ++m) {
        term *= -q / (static_cast<long double>(m) * (m + 1));
        sum += term;
    }
    return sum;
}

constexpr long double pi_l = 3.14159265358979323846264338327950288L;
constexpr long double gamma_l = 0.57721566490153286060651209008240243L;

long double y0_series(long double x) {
    long double q = x * x / 4.0L;
    long double term = 1.0L, sum = 0.0L, h = 0.0L;
    for (int m = 1; m < 80; ++m) {
        term *= -q / (static_cast<long double>(m) * m);
        h += 1.0L / m;
        sum += -term * h;
    }
    return 2.0L / pi_l * ((std::log(x / 2.0L) + gamma_l) * j0_series(x) + sum);
}

long double y1_series(long double x) {
    long double q = x * x / 4.0L;
    long double term = x / 2.0L;
    long double psum = 1.0L;  // psi(1)+psi(2) shifted: H_0 + H_1 = 1
    long double sum = term * (2.0L * -gamma_l + psum);
    long double h0 = 0.0L, h1 = 1.0L;
    for (int m = 1; m < 80; ++m) {
        term *= -q / (static_cast<long double>(m) * (m + 1));
        h0 += 1.0L / m;
        h1 += 1.0L / (m + 1);
        sum += term * (2.0L * -gamma_l + h0 + h1);
    }
    return (2.0L / pi_l) * j1_series(x) * std::log(x / 2.0L) - 2.0L / (pi_l * x) -
           sum / pi_l;
}

// Exact integral of t^m * ln|t - a| over [-1, 1] via integration by parts with
// the antiderivative (t^{m+1} - a^{m+1})/(m+1), which removes the singularity.
// For |a| > 1 the a^{m+1}-sized terms cancel catastrophically, so they are
// regrouped into the convergent tail series
//   a^{m+1} * ( ln|(1+a)/(1-a)| - sum_{j even <= m} 2/((j+1) a^{j+1}) )
//     = a^{m+1} * sum_{j even > m} 2/((j+1) a^{j+1}).
double monomial_log_integral(int m, double a) {
    if (std::abs(a) > 1.0) {
        double tail = 0.0;
        int j = (m % 2 == 0) ? m + 2 : m + 1;
        double p = std::pow(a, m - j);  // magnitude < 1
        for (; std::abs(p) * 2.0 / (j + 1) > 1e-18 && j < 400000; j += 2) {
            tail += 2.0 / (j + 1) * p;
            p /= a * a;
        }
        double boundary = std::log(std::abs(1.0 - a)) +
                          (m % 2 == 0 ? 1.0 : -1.0) * std::log(std::abs(1.0 + a));
        return (boundary + tail) / (m + 1);
    }
    auto xlogx = [](double u, double v) { return u == 0.0 ? 0.0 : u * std::log(std::abs(v)); };
    double am1 = std::pow(a, m + 1);
    double boundary = xlogx(1.0 - am1, 1.0 - a) -
                      xlogx((m % 2 == 0 ? -1.0 : 1.0) - am1, 1.0 + a);
    double poly = 0.0;
    for (int j = 0; j <= m; j += 2) poly += std::pow(a, m - j) * 2.0 / (j + 1);
    return (boundary - poly) / (m + 1);
}

}  // namespace

TEST_CASE("bessel J against series oracle") {
    auto [j0_1, j1_1] = lrs::bessel_j0j1(1.0);
    CHECK(j0_1 == Catch::Approx(0.76519768655797).margin(1e-13));
    CHECK(j1_1 == Catch::Approx(0.44005058574493).margin(1e-13));

    for (double x = 0.05; x <= 12.0; x += 0.37) {
        auto [j0, j1] = lrs::bessel_j0j1(x);
        CHECK(std::abs(j0 - static_cast<double>(j0_series(x))) < 1e-13);
        CHECK(std::abs(j1 - static_cast<double>(j1_series(x))) < 1e-13);
    }

    auto [j0z, j1z] = lrs::bessel_j0j1(2.404825557695773);
    CHECK(std::abs(j0z) < 1e-13);
    CHECK(j1z == Catch::Approx(0.519147).margin(1e-6));

    auto [j0s, j1s] = lrs::bessel_j0j1(1e-8);
    CHECK(j0s == Catch::Approx(1.0).margin(1e-15));
    CHECK(j1s == Catch::Approx(0.5e-8).margin(1e-20));
}

TEST_CASE("bessel Y against series oracle") {
    auto [y0_1, y1_1] = lrs::bessel_y0y1(1.0);
    CHECK(y0_1 == Catch::Approx(0.08825696421568).margin(1e-12));
    CHECK(y1_1 == Catch::Approx(-0.78121282130029).margin(1e-12));

    for (double x = 0.05; x <= 12.0; x += 0.37) {
        auto [y0, y1] = lrs::bessel_y0y1(x);
        CHECK(std::abs(y0 - static_cast<double>(y0_series(x))) < 1e-12);
        CHECK(std::abs(y1 - static_cast<double>(y1_series(x))) < 1e-12);
    }

    auto [y0s, y1s] = lrs::bessel_y0y1(1e-8);
    double lead = 2.0 / lrs::pi * (std::log(1e-8 / 2.0) + lrs::euler_gamma);
    CHECK(y0s == Catch::Approx(lead).margin(1e-12));
    CHECK(y1s < -1e7);

    // Large-argument check via the Hankel asymptotic expansion
    // Y0 ~ sqrt(2/(pi x)) (P(x) sin chi + Q(x) cos chi), chi = x - pi/4,
    // truncated where terms are ~1e-12 at x = 100.
    {
        double x = 100.0;
        double z = 1.0 / (8.0 * x);
        double P = 1.0 - 4.5 * z * z + 11025.0 / 24.0 * z * z * z * z;
        double Q = -z + 37.5 * z * z * z;
        double chi = x - lrs::pi / 4.0;
        double asym = std::sqrt(2.0 / (lrs::pi * x)) * (P * std::sin(chi) + Q * std::cos(chi));
        auto [y0a, y1a] = lrs::bessel_y0y1(x);
        CHECK(y0a == Catch::Approx(asym).margin(1e-6));
        (void)y1a;
    }
}

TEST_CASE("bessel domain errors") {
    CHECK_THROWS_AS(lrs::bessel_j0j1(0.0), std::domain_error);
    CHECK_THROWS_AS(lrs::bessel_j0j1(-1.0), std::domain_error);
    CHECK_THROWS_AS(lrs::bessel_y0y1(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(lrs::hankel1(2, 1.0), std::domain_error);
    CHECK_THROWS_AS(lrs::hankel1(0, -2.0), std::domain_error);
}

TEST_CASE("hankel1 values and Wronskian") {
    lrs::complex h0 = lrs::hankel1(0, 1.0);
    lrs::complex h1 = lrs::hankel1(1, 1.0);
    CHECK(h0.real() == Catch::Approx(0.76519768655797).margin(1e-13));
    CHECK(h0.imag() == Catch::Approx(0.08825696421568).margin(1e-12));
    CHECK(h1.real() == Catch::Approx(0.44005058574493).margin(1e-13));
    CHECK(h1.imag() == Catch::Approx(-0.78121282130029).margin(1e-12));

    for (double lx = -6.0; lx <= 4.0; lx += 0.1) {
        double x = std::pow(10.0, lx);
        auto [j0, j1] = lrs::bessel_j0j1(x);
        auto [y0, y1] = lrs::bessel_y0y1(x);
        double w = j0 * y1 - j1 * y0;
        double target = -2.0 / (lrs::pi * x);
        CHECK(std::abs(w - target) <= 1e-11 * std::max(1.0, std::abs(target)));
    }
}

TEST_CASE("gauss_legendre basic rules") {
    auto r2 = lrs::gauss_legendre(2);
    CHECK(r2.nodes[0] == Catch::Approx(-1.0 / std::sqrt(3.0)).margin(1e-15));
    CHECK(r2.nodes[1] == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-15));
    CHECK(r2.weights[0] == Catch::Approx(1.0).margin(1e-15));

    CHECK_THROWS_AS(lrs::gauss_legendre(0), std::invalid_argument);
    CHECK_THROWS_AS(lrs::gauss_legendre(65), std::invalid_argument);

    for (int order : {1, 2, 3, 8, 16, 32, 64}) {
        auto r = lrs::gauss_legendre(order);
        double wsum = 0.0;
        for (int i = 0; i < order; ++i) {
            wsum += r.weights[i];
            CHECK(r.weights[i] > 0.0);
            if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
            CHECK(r.nodes[i] == Catch::Approx(-r.nodes[order - 1 - i]).margin(1e-15));
        }
        CHECK(wsum == Catch::Approx(2.0).margin(1e-14));
    }
}

TEST_CASE("gauss_legendre exactness") {
    auto r16 = lrs::gauss_legendre(16);
    double i30 = 0.0, i32 = 0.0;
    for (int j = 0; j < 16; ++j) {
        i30 += r16.weights[j] * std::pow(r16.nodes[j], 30);
        i32 += r16.weights[j] * std::pow(r16.nodes[j], 32);
    }
    CHECK(i30 == Catch::Approx(2.0 / 31.0).margin(1e-14));
    CHECK(std::abs(i32 - 2.0 / 33.0) > 1e-10);

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int order : {4, 9, 16, 33}) {
        auto r = lrs::gauss_legendre(order);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> c(2 * order);
            for (auto& v : c) v = coef(rng);
            double exact = 0.0;
            for (int m = 0; m < 2 * order; m += 2) exact += 2.0 * c[m] / (m + 1);
            double quad = 0.0;
            for (int j = 0; j < order; ++j) {
                double t = r.nodes[j], p = 0.0;
                for (int m = 2 * order - 1; m >= 0; --m) p = p * t + c[m];
                quad += r.weights[j] * p;
            }
            CHECK(std::abs(quad - exact) < 1e-13);
        }
    }
}

TEST_CASE("log product-integration weights against exact monomial integrals") {
    auto r16 = lrs::gauss_legendre(16);
    for (double tau0 : {0.0, 0.3, -0.9677, 0.99, -1.0027, 1.005, -1.2, 2.5, -3.0, 7.0}) {
        auto wl = lrs::log_weights(r16, tau0);
        for (int m = 0; m <= 15; ++m) {
            double exact = monomial_log_integral(m, tau0);
            double quad = 0.0;
            for (int j = 0; j < 16; ++j) quad += wl[j] * std::pow(r16.nodes[j], m);
            CHECK(std::abs(quad - exact) < 1e-12 * std::max(1.0, std::abs(exact)));
        }
    }
    // Exact endpoint hits are nudged inward; the moments are continuous there.
    auto at = lrs::log_legendre_moments(1.0, 4);
    auto near = lrs::log_legendre_moments(1.0 - 1e-13, 4);
    for (int m = 0; m <= 4; ++m) CHECK(std::abs(at[m] - near[m]) < 1e-11);
}
