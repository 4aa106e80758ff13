#pragma once

#include "minkrad/problem.hpp"

namespace minkrad {

/// Distance from ±1 at which φ reports saturation.
inline constexpr double kSlopeGuard = 1e-12;

/// φ(s) = s / sqrt(1 - s²). Throws Error(SlopeSaturation) when |s| >= 1 - kSlopeGuard.
double phi(double s);

/// φ⁻¹(y) = y / sqrt(1 + y²); total on the reals, |φ⁻¹(y)| < 1.
double phi_inv(double y);

/// d/dy φ⁻¹(y) = (1 + y²)^{-3/2}
double phi_inv_derivative(double y);

/// f(r,u) = λ a g(u) for u >= 0 and -u for u < 0, given the weight value `a`.
double extend_f_value(double lambda, double a, const Nonlinearity& g, double u);

/// ∂f/∂u for the same extension (right derivative at u = 0).
double extend_f_derivative(double lambda, double a, const Nonlinearity& g, double u);

/// f(r,u) with a(r) evaluated from the problem (domain-checked).
double extend_f(const RadialProblem& problem, double r, double u);

/// Worst margins of the three elementary φ inequalities on a sample grid:
///   φ⁻¹(θ φ(s)) >= θ s          θ ∈ [0,1], s ∈ [0,1)
///   φ(s) <= 2 φ(1/2) s           s ∈ [0,1/2]
///   |φ⁻¹(y)| <= |y|             y ∈ ℝ
/// A margin is (right side - left side) oriented so that >= 0 means it holds.
struct PhiInequalityReport {
  long points_tested = 0;
  long violations = 0;
  double convexity_margin = 0.0;
  double secant_margin = 0.0;
  double contraction_margin = 0.0;
  bool ok() const { return violations == 0; }
};

/// `samples` points per axis (>= 100); the convexity check runs on a samples × samples grid.
PhiInequalityReport check_phi_inequalities(int samples);

}  // namespace minkrad
