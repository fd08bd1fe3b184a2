#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lrs/kernels.hpp"
#include "lrs/nystrom.hpp"

using lrs::complex;
using lrs::Vec2;

TEST_CASE("phi_k values and symmetry") {
    Vec2 x{0.0, 0.0}, y{1.0, 0.0};
    complex v = lrs::phi_k(x, y, 1.0);
    auto [j0, j1] = lrs::bessel_j0j1(1.0);
    auto [y0, y1] = lrs::bessel_y0y1(1.0);
    CHECK(v.real() == Catch::Approx(-y0 / 4.0).margin(1e-15));
    CHECK(v.imag() == Catch::Approx(j0 / 4.0).margin(1e-15));

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 20; ++t) {
        Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
        if (lrs::norm(a - b) < 1e-6) continue;
        complex ab = lrs::phi_k(a, b, 2.7);
        complex ba = lrs::phi_k(b, a, 2.7);
        CHECK(std::abs(ab - ba) == 0.0);
    }
    CHECK_THROWS_AS(lrs::phi_k(x, x, 1.0), std::domain_error);
}

TEST_CASE("kernel_kprime orthogonality and finite-difference oracle") {
    Vec2 x{0.3, 0.2}, y{1.3, 0.2};
    CHECK(lrs::kernel_kprime(x, Vec2{0.0, 1.0}, y, 3.0) == complex(0.0, 0.0));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double k = 2.3;
    for (int t = 0; t < 20; ++t) {
        Vec2 a{u(rng), u(rng)}, b{u(rng) + 3.0, u(rng)};
        double ang = lrs::pi * u(rng);
        Vec2 nu{std::cos(ang), std::sin(ang)};
        complex kp = lrs::kernel_kprime(a, nu, b, k);
        double h = 1e-5;
        complex fd = (lrs::phi_k(a + h * nu, b, k) - lrs::phi_k(a - h * nu, b, k)) / (2.0 * h);
        CHECK(std::abs(kp - fd) < 1e-6);
    }
}

TEST_CASE("kernel rotation invariance") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double k = 1.7;
    for (int t = 0; t < 20; ++t) {
        Vec2 a{u(rng), u(rng)}, b{u(rng) + 2.5, u(rng)};
        double ang = lrs::pi * u(rng);
        Vec2 nu{std::cos(ang), std::sin(ang)};
        double rot = lrs::pi * u(rng);
        double c = std::cos(rot), s = std::sin(rot);
        auto R = [&](Vec2 v) { return Vec2{c * v.x - s * v.y, s * v.x + c * v.y}; };
        complex before = lrs::kernel_kprime(a, nu, b, k);
        complex after = lrs::kernel_kprime(R(a), R(nu), R(b), k);
        CHECK(std::abs(before - after) < 1e-13);
        CHECK(std::abs(lrs::phi_k(a, b, k) - lrs::phi_k(R(a), R(b), k)) < 1e-13);
    }
}

TEST_CASE("reflected kernel geometry") {
    double k = 2.0, R = 1.0;
    // x at the bottom of the arc, y at the origin: image point (0, R),
    // radial geometry gives kernel -(ik/4) H1(kR).
    Vec2 x{0.0, -R}, y{0.0, 0.0};
    complex v = lrs::kernel_kprime_reflected(x, y, k);
    complex expect = complex(0.0, -k / 4.0) * lrs::hankel1(1, k * R);
    CHECK(std::abs(v - expect) < 1e-14);

    // For y on the flat surface (y2 = 0) the reflected kernel equals the
    // plain kernel, so the arc-row combination K' - K'^re vanishes.
    for (double ang : {1.1 * lrs::pi, 1.5 * lrs::pi, 1.97 * lrs::pi}) {
        Vec2 xa{R * std::cos(ang), R * std::sin(ang)};
        Vec2 nu{std::cos(ang), std::sin(ang)};
        for (double y1 : {-0.9, -0.2, 0.5, 0.93}) {
            Vec2 yf{y1, 0.0};
            complex diff = lrs::kernel_kprime(xa, nu, yf, k) -
                           lrs::kernel_kprime_reflected(xa, yf, k);
            CHECK(std::abs(diff) < 1e-14);
        }
    }
}

TEST_CASE("log split reassembles the kernels near the diagonal") {
    double k = 3.1;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        double s = u(rng);
        double d = std::pow(10.0, -1.0 - 5.0 * std::abs(u(rng)));
        // Points on a parabola-like curve to exercise curvature.
        auto curve = [](double q) { return Vec2{q, 0.3 * q * q}; };
        Vec2 a = curve(s), b = curve(s + d);
        Vec2 tangent{1.0, 0.6 * s};
        double sp = lrs::norm(tangent);
        Vec2 nu{-tangent.y / sp, tangent.x / sp};
        lrs::KernelSplit split = lrs::kprime_split(a, nu, b, k);
        complex direct = lrs::kernel_kprime(a, nu, b, k);
        double r = lrs::norm(a - b);
        CHECK(std::abs(split.smooth + split.logcoef * std::log(r) - direct) < 1e-12);

        lrs::KernelSplit ss = lrs::single_split(a, b, k);
        CHECK(std::abs(ss.smooth + ss.logcoef * std::log(r) - lrs::phi_k(a, b, k)) < 1e-12);
    }
}

TEST_CASE("log split diagonal limits on a circle") {
    // On a circle of radius R with outward normal, K'(x,x) -> -1/(4 pi R);
    // the smooth parts must converge to the diagonal formulas as y -> x.
    double k = 0.5, R = 2.0;
    auto at = [&](double a) { return Vec2{R * std::cos(a), R * std::sin(a)}; };
    double a0 = 0.7;
    Vec2 x = at(a0);
    Vec2 nu{std::cos(a0), std::sin(a0)};
    complex diag = lrs::kprime_diagonal_smooth(-R, R);  // nu.x'' = -R, speed = R
    CHECK(diag.real() == Catch::Approx(-1.0 / (4.0 * lrs::pi * R)).margin(1e-15));
    for (double d : {1e-2, 1e-3, 1e-4}) {
        lrs::KernelSplit split = lrs::kprime_split(x, nu, at(a0 + d), k);
        CHECK(std::abs(split.smooth - diag) < 5.0 * d);
        CHECK(std::abs(split.logcoef) < k * k * R * d);
    }
    for (double d : {1e-2, 1e-3, 1e-4}) {
        lrs::KernelSplit ss = lrs::single_split(x, at(a0 + d), k);
        CHECK(std::abs(ss.smooth - lrs::single_diagonal_smooth(k)) < 5.0 * d);
        CHECK(std::abs(ss.logcoef + 1.0 / (2.0 * lrs::pi)) < d);
    }
}

TEST_CASE("combined arc kernel stays bounded approaching a corner") {
    auto prof = lrs::SurfaceProfile::builtin(lrs::ProfileKind::SineBump);
    lrs::CurveSet curves(prof, 1.0, {0.0, -0.5}, 0.1);
    double k = 5.0;
    // x on the arc approaching corner x_A, y on GammaR approaching the same
    // corner: the difference kernel must remain bounded.
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
        lrs::CurvePoint cx = curves.at(lrs::CurveLabel::LowerArc, lrs::pi + eps);
        lrs::CurvePoint cy = curves.at(lrs::CurveLabel::GammaR, -1.0 + eps);
        complex diff = lrs::kernel_kprime(cx.x, cx.normal, cy.x, k) -
                       lrs::kernel_kprime_reflected(cx.x, cy.x, k);
        CHECK(std::abs(diff) < 10.0 * k);
    }
}

TEST_CASE("WaveContext validation") {
    CHECK_THROWS_AS(lrs::WaveContext(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(lrs::WaveContext(1.0, -1.0), std::invalid_argument);
    lrs::WaveContext ctx(10.0, 1.0);
    CHECK_NOTHROW(ctx.check_aux_radius(0.1));
    CHECK_THROWS_AS(ctx.check_aux_radius(0.25), std::invalid_argument);
}

TEST_CASE("flat-surface assembly structure") {
    auto prof = lrs::SurfaceProfile::flat();
    lrs::CurveSet curves(prof, 1.0, {0.0, -0.5}, 0.1);
    lrs::WaveContext ctx(2.0, 1.0);
    auto mesh = lrs::build_coarse_mesh(curves, 4);
    lrs::CMat A = lrs::assemble_A(mesh, ctx);
    CHECK(A.rows() == mesh.node_count());

    // A11 (GammaR -> GammaR) vanishes identically on a straight segment.
    int ng = mesh.gamma_panels * lrs::nodes_per_panel;
    CHECK(A.topLeftCorner(ng, ng).cwiseAbs().maxCoeff() < 1e-14);

    // Determinism: reassembly is bitwise identical.
    lrs::CMat B = lrs::assemble_A(mesh, ctx);
    CHECK((A - B).cwiseAbs().maxCoeff() == 0.0);

    // Two-curve assembly equals the leading sub-blocks of the three-curve one.
    auto mesh2 = lrs::build_coarse_mesh(curves, 4, false);
    lrs::CMat A2 = lrs::assemble_A(mesh2, ctx);
    int nb = mesh2.node_count();
    CHECK((A.topLeftCorner(nb, nb) - A2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("flat-surface right-hand sides vanish") {
    auto prof = lrs::SurfaceProfile::flat();
    lrs::CurveSet curves(prof, 1.0, {0.0, -0.5}, 0.1);
    lrs::WaveContext ctx(1.0, 1.0);
    auto mesh = lrs::build_coarse_mesh(curves, 4);
    for (double theta : {0.0, 0.6, -1.2}) {
        lrs::CVec G = lrs::assemble_G_planewave(mesh, ctx, theta);
        CHECK(G.cwiseAbs().maxCoeff() < 1e-13);
    }
    lrs::CVec Gp = lrs::assemble_G_pointsource(mesh, ctx, Vec2{-0.1, 0.1});
    CHECK(Gp.cwiseAbs().maxCoeff() < 1e-13);
    // Sources below the flat surface also give symmetric (vanishing) data.
    lrs::CVec Gb = lrs::assemble_G_pointsource(mesh, ctx, Vec2{0.15, -0.2});
    CHECK(Gb.cwiseAbs().maxCoeff() < 1e-13);
    CHECK_THROWS_AS(lrs::assemble_G_pointsource(mesh, ctx, Vec2{0.3, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(lrs::assemble_G_planewave(mesh, ctx, 1.6), std::invalid_argument);
}

TEST_CASE("plane-wave right-hand side against symbolic values at theta = 0") {
    auto prof = lrs::SurfaceProfile::builtin(lrs::ProfileKind::SineBump);
    lrs::CurveSet curves(prof, 1.0, {0.0, -0.5}, 0.1);
    double k = 2.0;
    lrs::WaveContext ctx(k, 1.0);
    auto mesh = lrs::build_coarse_mesh(curves, 6);
    lrs::CVec G = lrs::assemble_G_planewave(mesh, ctx, 0.0);
    // d = (0,-1): G = 2ik nu2 (-e^{-ikh} + e^{ikh}) = -4k nu2 sin(kh).
    for (int i : {3, 40, 77}) {
        double t = mesh.param[i];
        double h = prof.h(t);
        double nu2 = mesh.normal[i].y;
        complex expect = -4.0 * k * nu2 * std::sin(k * h);
        CHECK(std::abs(G(i) - expect) < 1e-12);
    }
}

TEST_CASE("tangential derivative of panel interpolants") {
    auto prof = lrs::SurfaceProfile::flat();
    lrs::CurveSet curves(prof, 1.0, {0.0, -0.5}, 0.1);
    auto mesh = lrs::build_coarse_mesh(curves, 5);
    int ng = mesh.gamma_panels * lrs::nodes_per_panel;

    lrs::CVec constv = lrs::CVec::Constant(ng, complex(2.5, -1.0));
    CHECK(lrs::tangential_derivative(mesh, constv).cwiseAbs().maxCoeff() < 1e-12);

    lrs::CVec cubic(ng), expect(ng);
    for (int i = 0; i < ng; ++i) {
        double x1 = mesh.param[i];
        cubic(i) = x1 * x1 * x1;
        expect(i) = 3.0 * x1 * x1;
    }
    lrs::CVec d = lrs::tangential_derivative(mesh, cubic);
    CHECK((d - expect).cwiseAbs().maxCoeff() < 1e-12);

    double k = 7.0;
    lrs::CVec wave(ng);
    for (int i = 0; i < ng; ++i)
        wave(i) = std::exp(complex(0.0, k * 0.8 * mesh.param[i]));
    lrs::CVec dw = lrs::tangential_derivative(mesh, wave);
    for (int i = 0; i < ng; ++i)
        CHECK(std::abs(dw(i) - complex(0.0, k * 0.8) * wave(i)) < 1e-9);
}
