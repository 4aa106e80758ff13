#include <doctest.h>

#include <cmath>

#include "common.hpp"

using namespace minkrad;

TEST_SUITE("constants") {
  TEST_CASE("desk problem closed forms") {
    const RadialProblem p = testing::desk(1.0);
    const SignStructure s = detect_sign_structure(p);
    const ConstantsBundle b = compute_bundle(s, p, 0.2);
    const double dl = 0.2 / (1.0 + 2.0 / std::sqrt(3.0) / 0.4);
    CHECK(b.delta_star == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(b.delta_low == doctest::Approx(dl).epsilon(1e-14));
    CHECK(b.min_g == doctest::Approx(dl * dl).epsilon(1e-9));
    CHECK(b.lambda_star == doctest::Approx(2.0 / std::sqrt(3.0) / (dl * dl * 0.2)).epsilon(1e-8));
    CHECK_FALSE(b.gamma.has_value());
    CHECK(trimmed_integral(p, 1.4, 1.6) == doctest::Approx(0.2));
  }

  TEST_CASE("epsilon constraints") {
    const RadialProblem p = testing::desk(1.0);
    const SignStructure s = detect_sign_structure(p);
    CHECK_THROWS_AS(compute_bundle(s, p, 0.25), Error);
    const double e = choose_epsilon(s, p, EpsilonPolicy::Maximal);
    CHECK(e < 0.25);
    CHECK(e > 0.249);
    const double emin = choose_epsilon(s, p, EpsilonPolicy::MinimizeLambdaStar);
    CHECK(compute_bundle(s, p, emin).lambda_star <= compute_bundle(s, p, e).lambda_star);
  }

  TEST_CASE("first interval at the origin uses gamma") {
    RadialProblem p = testing::desk(1.0);
    p.dimension = 2;
    p.weight = Weight(PiecewiseConstantWeight{{1.0}, {1.0, -1.0}});
    const SignStructure s = detect_sign_structure(p);
    REQUIRE(s.intervals.size() == 1);
    CHECK(s.intervals[0].sigma == 0.0);
    const ConstantsBundle b = compute_bundle(s, p, 0.2);
    REQUIRE(b.gamma.has_value());
    CHECK(*b.gamma == doctest::Approx(std::min(b.delta_star, 1.0) / 2.0));
    CHECK(b.delta_low < b.delta_star);
  }

  TEST_CASE("hypothesis violations") {
    ConstantsOptions co;
    co.estimate_bounds = false;
    try {
      compute_constants(testing::negative_constant(1, 3.0, 1.0), co);
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NoPositivityInterval);
      CHECK(e.is_hypothesis_violation());
    }
    RadialProblem p = testing::desk(1.0);
    p.weight = Weight(PiecewiseConstantWeight{{1.0, 2.0}, {-0.1, 1.0, -0.1}});
    try {
      compute_constants(p, co);
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MeanConditionViolated);
    }
  }

  TEST_CASE("min g sampling") {
    CHECK(min_g_on(Nonlinearity(PowerNonlinearity{2.0}), 0.5, 2.0) == doctest::Approx(0.25));
    const Nonlinearity t(TableNonlinearity{{0.0, 1.0, 2.0, 3.0}, {0.0, 3.0, 1.0, 4.0}});
    CHECK(min_g_on(t, 1.0, 3.0) == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("figure1 bundle is finite and empirical bounds are tagged") {
    ConstantsOptions co;
    co.grid_cells = 400;
    const ConstantsBundle b = compute_constants(figure1_problem(), co);
    CHECK(std::isfinite(b.lambda_star));
    CHECK(b.delta_low < b.delta_star);
    REQUIRE(b.d_star.has_value());
    REQUIRE(b.D_star.has_value());
    CHECK(*b.d_star < b.delta_star);
    CHECK(*b.D_star > 6.6);
    CHECK(b.D_star_provenance == Provenance::Empirical);
  }
}
