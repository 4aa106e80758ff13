#include <doctest.h>

#include <cmath>

#include "common.hpp"

using namespace minkrad;

TEST_SUITE("verify") {
  TEST_CASE("zero profile passes as trivial") {
    const RadialProblem p = figure1_problem();
    const Certificate c = certify(p, GridProfile::constant(Grid::for_problem(p, 100), 0.0));
    CHECK(c.overall);
    CHECK(c.trivial);
    CHECK(c.ode_residual_sup == 0.0);
    CHECK(c.min_u == 0.0);
  }

  TEST_CASE("solver output certifies, perturbations do not") {
    const RadialProblem p = figure1_problem();
    SolveOptions so;
    so.grid_cells = 1000;
    so.start_level = 2.0;
    const auto s = solve(p, {}, so);
    REQUIRE(s.report.converged);
    const Certificate c = certify(p, s.profile);
    CHECK(c.overall);
    CHECK(c.min_u > 0.0);
    CHECK(c.max_abs_slope < 1.0);
    CHECK(c.flux_monotone);
    CHECK(c.balance_ratio < 1e-10);

    GridProfile bumped = s.profile;
    for (double& v : bumped.u) v += 0.01;
    const Certificate cb = certify(p, bumped);
    CHECK_FALSE(cb.overall);
    CHECK(std::abs(cb.integral_identity) > cb.integral_tolerance);

    GridProfile bad_slope = s.profile;
    bad_slope.du.back() = 1e-3;
    CHECK_FALSE(certify(p, bad_slope).overall);
  }

  TEST_CASE("near-constant profiles with tiny lambda are rejected") {
    RadialProblem p = figure1_problem();
    p.lambda = 1e-9;
    const Certificate c = certify(p, GridProfile::constant(Grid::for_problem(p, 200), 1e-5));
    CHECK_FALSE(c.trivial);
    CHECK_FALSE(c.overall);
  }

  TEST_CASE("oracle profiles pass at interpolated tolerances") {
    const RadialProblem p = figure1_problem();
    StepControls ctl;
    ctl.output_cells = 1000;
    const ShotResult s = integrate_shot(p, 1.9764045123841394, ctl);
    REQUIRE(s.valid);
    CHECK(certify(p, s.profile, Tolerances::interpolated()).overall);
  }

  TEST_CASE("claim checks") {
    const Grid g = Grid::uniform(3.0, 30);
    GridProfile u = GridProfile::constant(g, 0.1);
    ClaimContext ctx{0.2, 0.2, std::nullopt, {{1.0, 2.0}}};
    CHECK(check_slope_bound(u, ctx, 1e-9, 1).passed());
    CHECK(check_half_slope(u, ctx, 1e-9).passed());
    for (auto& d : u.du) d = 0.9;
    const ClaimCheck h = check_half_slope(u, ctx, 1e-9);
    CHECK(h.applicable);
    CHECK_FALSE(h.passed());
    const ClaimCheck sb = check_slope_bound(u, ctx, 1e-9, 1);
    CHECK_FALSE(sb.passed());
  }
}
