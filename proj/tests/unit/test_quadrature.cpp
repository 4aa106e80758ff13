#include <doctest.h>

#include <cmath>
#include <vector>

#include "common.hpp"

using namespace minkrad;

namespace {

double integrate(int N, const std::vector<double>& nodes, double (*h)(double), bool third) {
  std::vector<bool> kink(nodes.size(), false);
  kink[0] = true;
  double acc = 0.0;
  if (third) {
    const auto rules = cell_rules(N, nodes, kink);
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j)
      acc += (j ? rules[j].prev * h(nodes[j - 1]) : 0.0) + rules[j].left * h(nodes[j]) + rules[j].right * h(nodes[j + 1]);
  } else {
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
      const auto m = linear_moment(N, nodes[j], nodes[j + 1]);
      acc += m.left * h(nodes[j]) + m.right * h(nodes[j + 1]);
    }
  }
  return acc;
}

double cube(double x) { return x * x * x + 1.0; }
double wave(double x) { return std::sin(3.0 * x); }

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("moments are exact") {
    for (int N : {1, 2, 3, 5}) {
      const double a = 0.7, b = 1.9;
      CHECK(power_moment(N, a, b) == doctest::Approx((std::pow(b, N) - std::pow(a, N)) / N));
      const auto m = linear_moment(N, a, b);
      CHECK(m.left + m.right == doctest::Approx(power_moment(N, a, b)));
      // ∫ ξ^{N-1} ξ dξ
      CHECK(m.left * a + m.right * b == doctest::Approx((std::pow(b, N + 1) - std::pow(a, N + 1)) / (N + 1)));
    }
    CHECK(curvature_moment(1, 0.0, 1.0) == doctest::Approx(1.0 / 12.0));
  }

  TEST_CASE("narrow cells far from the origin keep their digits") {
    const double a = 1e4, b = a + 1e-6, h = b - a;
    const auto m = linear_moment(3, a, b);
    CHECK(m.left == doctest::Approx(a * a * h / 2 + a * h * h / 3 + h * h * h / 12).epsilon(1e-12));
  }

  TEST_CASE("third-order rule is Adams-Moulton on uniform N=1 grids") {
    const std::vector<double> nodes{0.0, 1.0, 2.0};
    const auto rules = cell_rules(1, nodes, {true, false, false});
    CHECK(rules[0].prev == 0.0);
    CHECK(rules[1].prev == doctest::Approx(-1.0 / 12.0));
    CHECK(rules[1].left == doctest::Approx(8.0 / 12.0));
    CHECK(rules[1].right == doctest::Approx(5.0 / 12.0));
  }

  TEST_CASE("third-order rule integrates quadratics exactly and converges at order 3") {
    for (int N : {1, 2, 3}) {
      std::vector<double> nodes;
      for (int i = 0; i <= 20; ++i) nodes.push_back(2.0 * std::pow(i / 20.0, 1.2));
      const double exact = [N] {
        // ∫_0^2 ξ^{N-1}(ξ³ + 1)
        return std::pow(2.0, N + 3) / (N + 3) + std::pow(2.0, N) / N;
      }();
      CHECK(std::abs(integrate(N, nodes, cube, true) - exact) < std::abs(integrate(N, nodes, cube, false) - exact));
    }
    auto err = [](int M, bool third) {
      std::vector<double> nodes;
      for (int i = 0; i <= M; ++i) nodes.push_back(2.0 * i / M);
      return std::abs(integrate(2, nodes, wave, third) - (std::sin(6.0) / 9.0 - 2.0 * std::cos(6.0) / 3.0));
    };
    CHECK(std::log2(err(100, false) / err(200, false)) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::log2(err(100, true) / err(200, true)) > 2.8);
  }
}
