// Long-running resolution sweep at k = 100.  Excluded from the default test
// run; enable with -DLRS_ENABLE_EXTENDED_TESTS=ON.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "lrs/forward.hpp"

TEST_CASE("point-source error reaches a plateau at high frequency") {
    lrs::ForwardConfig cfg;
    cfg.profile = lrs::SurfaceProfile::builtin(lrs::ProfileKind::SineBump);
    cfg.k = 100.0;
    cfg.aux_radius = 0.02;  // keeps k * aux_radius below the first zero of J0
    cfg.n_sub = 30;
    cfg.incidence = lrs::Incidence::point({0.1, 0.1});
    auto dirs = lrs::upper_half_directions(51);

    std::vector<int> n_pan_list;
    for (int n = 1; n <= 24; ++n) n_pan_list.push_back(5 * n);
    auto rows = lrs::convergence_study(cfg, n_pan_list, dirs);
    double best = 1.0;
    for (const auto& row : rows) {
        std::printf("n_pan %3d  rel %.3e\n", row.n_pan, row.relative_error);
        best = std::min(best, row.relative_error);
    }
    CHECK(best <= 1e-6);
}
