#include <doctest.h>

#include <cmath>

#include "common.hpp"

using namespace minkrad;

TEST_SUITE("curvature") {
  TEST_CASE("phi and its inverse") {
    CHECK(phi(0.0) == 0.0);
    CHECK(phi(0.5) == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(phi_inv(1.0 / std::sqrt(3.0)) == doctest::Approx(0.5));
    CHECK(phi_inv(1e6) < 1.0);
    CHECK_THROWS_AS(phi(1.0), Error);
    for (double y : {-30.0, -1.0, 0.0, 0.3, 7.0}) {
      const double h = 1e-6;
      const double fd = (phi_inv(y + h) - phi_inv(y - h)) / (2 * h);
      CHECK(phi_inv_derivative(y) == doctest::Approx(fd).epsilon(1e-6));
    }
  }

  TEST_CASE("extended nonlinearity") {
    const Nonlinearity g(PowerNonlinearity{2.0});
    CHECK(extend_f_value(2.0, -1.0, g, 3.0) == doctest::Approx(-18.0));
    CHECK(extend_f_value(2.0, -1.0, g, -3.0) == doctest::Approx(3.0));
    CHECK(extend_f_derivative(2.0, 1.0, g, -1.0) == -1.0);
    CHECK(extend_f_derivative(2.0, 1.0, g, 1.5) == doctest::Approx(6.0));
  }

  TEST_CASE("elementary inequalities on a grid") {
    const PhiInequalityReport r = check_phi_inequalities(120);
    CHECK(r.ok());
    CHECK(r.points_tested >= 10000);
    CHECK(r.secant_margin >= 0.0);
  }
}
