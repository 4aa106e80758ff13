#include "minkrad/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "minkrad/error.hpp"

namespace minkrad {

double phi(double s) {
  if (!(std::abs(s) < 1.0 - kSlopeGuard)) {
    std::ostringstream os;
    os.precision(17);
    os << "slope saturation: |s| = " << std::abs(s) << " reached the gradient constraint";
    throw Error(ErrorKind::SlopeSaturation, os.str());
  }
  return s / std::sqrt((1.0 - s) * (1.0 + s));
}

double phi_inv(double y) {
  if (std::isinf(y)) return y > 0 ? 1.0 : -1.0;
  return y / std::hypot(1.0, y);
}

double phi_inv_derivative(double y) {
  const double s = std::hypot(1.0, y);
  return 1.0 / (s * s * s);
}

double extend_f_value(double lambda, double a, const Nonlinearity& g, double u) {
  return u >= 0.0 ? lambda * a * g(u) : -u;
}

double extend_f_derivative(double lambda, double a, const Nonlinearity& g, double u) {
  return u >= 0.0 ? lambda * a * g.derivative(u) : -1.0;
}

double extend_f(const RadialProblem& problem, double r, double u) {
  return extend_f_value(problem.lambda, eval_weight(problem, r), problem.nonlinearity, u);
}

PhiInequalityReport check_phi_inequalities(int samples) {
  if (samples < 100) throw Error(ErrorKind::InvalidInput, "check_phi_inequalities needs samples >= 100");
  PhiInequalityReport rep;
  rep.convexity_margin = rep.secant_margin = rep.contraction_margin = std::numeric_limits<double>::infinity();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double two_phi_half = 2.0 * phi(0.5);

  auto record = [&](double margin, double scale, double& worst) {
    ++rep.points_tested;
    worst = std::min(worst, margin);
    if (margin < -8.0 * eps * std::max(1.0, scale)) ++rep.violations;
  };

  // s spans [0, 1 - 1e-6] with clustering toward 1, θ spans [0, 1].
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    const double s = (1.0 - 1e-6) * (1.0 - (1.0 - t) * (1.0 - t));
    const double ps = phi(s);
    for (int j = 0; j < samples; ++j) {
      const double theta = static_cast<double>(j) / (samples - 1);
      record(phi_inv(theta * ps) - theta * s, theta * ps, rep.convexity_margin);
    }
  }
  for (int i = 0; i < samples; ++i) {
    const double s = 0.5 * i / (samples - 1);
    record(two_phi_half * s - phi(s), 1.0, rep.secant_margin);
  }
  for (int i = 0; i < samples; ++i) {
    const double mag = std::pow(10.0, -12.0 + 24.0 * i / (samples - 1));
    for (double y : {mag, -mag}) record(std::abs(y) - std::abs(phi_inv(y)), std::abs(y), rep.contraction_margin);
  }
  record(0.0 - std::abs(phi_inv(0.0)), 0.0, rep.contraction_margin);
  return rep;
}

}  // namespace minkrad
