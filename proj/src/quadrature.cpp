#include "minkrad/quadrature.hpp"

#include "minkrad/error.hpp"

namespace minkrad {

namespace {

// h * Σ_k C(N-1,k) a^{N-1-k} h^k * coeff(k)
template <typename Coeff>
double binomial_moment(int dimension, double a, double h, Coeff coeff) {
  const int n = dimension - 1;
  double sum = 0.0;
  double binom = 1.0;
  double hk = 1.0;
  for (int k = 0; k <= n; ++k) {
    double a_pow = 1.0;
    for (int j = 0; j < n - k; ++j) a_pow *= a;
    sum += binom * a_pow * hk * coeff(static_cast<double>(k));
    binom = binom * static_cast<double>(n - k) / static_cast<double>(k + 1);
    hk *= h;
  }
  return h * sum;
}

}  // namespace

LinearMoment linear_moment(int dimension, double a, double b) {
  const double h = b - a;
  // ∫_0^1 (a+ht)^{N-1} (1-t) dt and ∫_0^1 (a+ht)^{N-1} t dt, termwise.
  const double left = binomial_moment(dimension, a, h, [](double k) { return 1.0 / ((k + 1.0) * (k + 2.0)); });
  const double right = binomial_moment(dimension, a, h, [](double k) { return 1.0 / (k + 2.0); });
  return {left, right};
}

double power_moment(int dimension, double a, double b) {
  return binomial_moment(dimension, a, b - a, [](double k) { return 1.0 / (k + 1.0); });
}

double curvature_moment(int dimension, double a, double b) {
  const double h = b - a;
  return h * h * binomial_moment(dimension, a, h, [](double k) { return 0.5 / ((k + 2.0) * (k + 3.0)); });
}

std::vector<CellRule> cell_rules(int dimension, std::span<const double> nodes, const std::vector<bool>& kink) {
  if (nodes.size() < 2 || kink.size() != nodes.size()) throw Error(ErrorKind::InvalidInput, "cell_rules: bad node data");
  std::vector<CellRule> out(nodes.size() - 1);
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    const auto m = linear_moment(dimension, nodes[j], nodes[j + 1]);
    out[j] = {0.0, m.left, m.right};
    if (j == 0 || kink[j]) continue;
    const double h0 = nodes[j] - nodes[j - 1], h1 = nodes[j + 1] - nodes[j];
    const double K = curvature_moment(dimension, nodes[j], nodes[j + 1]);
    const double D = 2.0 / (h0 + h1);
    out[j].prev -= K * D / h0;
    out[j].left += K * D * (1.0 / h0 + 1.0 / h1);
    out[j].right -= K * D / h1;
  }
  return out;
}

}  // namespace minkrad
