#include <doctest.h>

#include <cmath>

#include "common.hpp"

using namespace minkrad;

TEST_SUITE("problem") {
  TEST_CASE("figure1 weight values and sign structure") {
    const RadialProblem p = figure1_problem();
    CHECK(p.dimension == 2);
    CHECK(p.radius == 5.0);
    CHECK(eval_weight(p, 5.0) == doctest::Approx(std::cos(1.0)));
    CHECK(eval_weight(p, 0.0) == doctest::Approx(std::cos(std::pow(5.0, 1.5) + 1.0)));
    const SignStructure s = detect_sign_structure(p);
    REQUIRE(s.intervals.size() == 3);
    CHECK(s.intervals[0].sigma == 0.0);
    CHECK(s.intervals[0].tau == doctest::Approx(0.359781).epsilon(1e-5));
    CHECK(s.intervals[2].tau == doctest::Approx(5.0));
    CHECK(check_mean_condition(s));
    CHECK_THROWS_AS(eval_weight(p, 5.5), Error);
  }

  TEST_CASE("piecewise weight takes the right-hand value at breakpoints") {
    const RadialProblem p = testing::desk(1.0);
    CHECK(p.weight(1.0) == 1.0);
    CHECK(p.weight.left_limit(1.0) == -1.0);
    CHECK(p.weight.right_limit(2.0) == -1.0);
    CHECK(p.weight.breakpoints(0.0, 3.0) == std::vector<double>{1.0, 2.0});
    const SignStructure s = detect_sign_structure(p);
    REQUIRE(s.intervals.size() == 1);
    CHECK(s.intervals[0].sigma == doctest::Approx(1.0));
    CHECK(s.intervals[0].tau == doctest::Approx(2.0));
    CHECK(s.weighted_mean == doctest::Approx(-1.0));
  }

  TEST_CASE("validation and hypotheses") {
    RadialProblem p = testing::desk(1.0);
    p.lambda = -1.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = testing::desk(1.0);
    CHECK_THROWS_AS(Weight(PiecewiseConstantWeight{{2.0, 1.0}, {0.0, 1.0, 0.0}}), Error);

    const HypothesisReport ok = check_hypotheses(figure1_problem());
    CHECK(ok.nonlinearity_ok());
    CHECK(ok.weight_ok());
    const HypothesisReport neg = check_hypotheses(testing::negative_constant(1, 3.0, 1.0));
    CHECK_FALSE(neg.weight_has_positive_part);
  }

  TEST_CASE("nonlinearities") {
    const Nonlinearity g(PowerSumNonlinearity{2.0, 3.0});
    CHECK(g(2.0) == doctest::Approx(12.0));
    CHECK(g.derivative(2.0) == doctest::Approx(16.0));
    const Nonlinearity t(TableNonlinearity{{0.0, 1.0, 2.0}, {0.0, 1.0, 4.0}});
    CHECK(t(1.5) == doctest::Approx(2.5));
    CHECK(weighted_integral(Weight::constant(1.0), 3, 0.0, 2.0, 16) == doctest::Approx(8.0 / 3.0));
  }
}
