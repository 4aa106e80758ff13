#include <doctest.h>

#include <cmath>

#include "common.hpp"

using namespace minkrad;

TEST_SUITE("shooting") {
  TEST_CASE("zero level stays at zero") {
    const ShotResult s = integrate_shot(figure1_problem(), 0.0);
    CHECK(s.valid);
    CHECK(s.defect == 0.0);
    CHECK(s.profile.sup_norm() == 0.0);
  }

  TEST_CASE("negative weight makes shots increase") {
    for (int N : {1, 2}) {
      const RadialProblem p = testing::negative_constant(N, 1.0, 1.0);
      const ShotResult s = integrate_shot(p, 0.5);
      REQUIRE(s.valid);
      CHECK(s.defect > 0.0);
      for (std::size_t i = 1; i < s.profile.u.size(); ++i) CHECK(s.profile.u[i] > s.profile.u[i - 1]);
    }
  }

  TEST_CASE("figure1 roots") {
    RootOptions ro;
    ro.samples = 24;
    ro.controls.output_cells = 400;
    const auto roots = find_roots(figure1_problem(), 1.5, 7.0, ro);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].c == doctest::Approx(1.9764045123841394).epsilon(1e-9));
    CHECK(roots[1].c == doctest::Approx(5.7224414669312695).epsilon(1e-9));
    for (const auto& r : roots) {
      CHECK(std::abs(r.defect) <= 1e-10);
      // v(R) = -∫ r^{N-1} λ a g(u)
      CHECK(std::abs(r.flux_R) <= 1e-9);
    }
  }

  TEST_CASE("ranges without roots and input checks") {
    RootOptions ro;
    ro.samples = 8;
    ro.controls.output_cells = 200;
    CHECK(find_roots(figure1_problem(), 2.5, 4.0, ro).empty());
    CHECK_THROWS_AS(find_roots(figure1_problem(), 0.0, 1.0, ro), Error);
    ro.samples = 4;
    CHECK_THROWS_AS(find_roots(figure1_problem(), 1.0, 2.0, ro), Error);
    CHECK_THROWS_AS(integrate_shot(figure1_problem(), -1.0), Error);
  }

  TEST_CASE("saturating shots are reported invalid with a location") {
    const ShotResult s = integrate_shot(testing::desk(4330.45), 2.5);
    CHECK_FALSE(s.valid);
    CHECK(s.saturation_radius > 0.0);
    CHECK(s.saturation_radius < 3.0);
  }

  TEST_CASE("step halving moves the root by little") {
    RootOptions ro;
    ro.samples = 8;
    ro.controls.output_cells = 200;
    ro.controls.rtol = 1e-8;
    ro.controls.atol = 1e-10;
    const auto coarse = find_roots(figure1_problem(), 1.8, 2.2, ro);
    ro.controls.rtol = 1e-12;
    ro.controls.atol = 1e-14;
    const auto fine = find_roots(figure1_problem(), 1.8, 2.2, ro);
    REQUIRE(coarse.size() == 1);
    REQUIRE(fine.size() == 1);
    CHECK(std::abs(coarse[0].c - fine[0].c) < 1e-6);
  }
}
