#pragma once

#include <string>
#include <variant>
#include <vector>

namespace minkrad {

// ---------------------------------------------------------------------------
// Weight a(r)
// ---------------------------------------------------------------------------

/// a(r) = cos(|r - center|^exponent + phase)
struct CosineShiftedWeight {
  double center = 5.0;
  double phase = 1.0;
  double exponent = 1.5;
};

/// values[k] holds on the k-th piece delimited by the strictly increasing
/// breakpoints; values.size() == breakpoints.size() + 1. At a breakpoint the
/// function takes the value of the piece to its right.
struct PiecewiseConstantWeight {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

/// Linear interpolation of (r, a) samples; constant extrapolation outside.
struct TableWeight {
  std::vector<double> r;
  std::vector<double> a;
};

class Weight {
 public:
  using Spec = std::variant<CosineShiftedWeight, PiecewiseConstantWeight, TableWeight>;

  Weight() : spec_(PiecewiseConstantWeight{{}, {0.0}}) {}
  Weight(Spec spec);  // NOLINT(google-explicit-constructor)

  static Weight constant(double value) { return Weight(PiecewiseConstantWeight{{}, {value}}); }

  double operator()(double r) const;
  double left_limit(double r) const;
  double right_limit(double r) const;

  /// Points in the open interval (lo, hi) where the weight jumps or kinks.
  std::vector<double> breakpoints(double lo, double hi) const;
  bool has_jumps() const;

  const Spec& spec() const { return spec_; }
  std::string kind_name() const;

 private:
  Spec spec_;
};

// ---------------------------------------------------------------------------
// Nonlinearity g(u), u >= 0
// ---------------------------------------------------------------------------

struct PowerNonlinearity {
  double p = 2.0;
};

/// g(u) = u^p + u^q
struct PowerSumNonlinearity {
  double p = 2.0;
  double q = 3.0;
};

/// Piecewise-linear through (u, g); u[0] must be 0 and g[0] must be 0.
/// Linear extrapolation past the last node, clamped at zero.
struct TableNonlinearity {
  std::vector<double> u;
  std::vector<double> g;
};

/// g(u) = e^u - 1 - u. Superlinear at zero but too fast at infinity; kept for
/// exercising the growth checks.
struct ExponentialNonlinearity {};

class Nonlinearity {
 public:
  using Spec = std::variant<PowerNonlinearity, PowerSumNonlinearity, TableNonlinearity, ExponentialNonlinearity>;

  Nonlinearity() : spec_(PowerNonlinearity{}) {}
  Nonlinearity(Spec spec);  // NOLINT(google-explicit-constructor)

  double operator()(double u) const;
  double derivative(double u) const;

  const Spec& spec() const { return spec_; }
  std::string kind_name() const;

 private:
  Spec spec_;
};

// ---------------------------------------------------------------------------
// Problem
// ---------------------------------------------------------------------------

/// (r^{N-1} φ(u'))' + λ r^{N-1} a(r) g(u) = 0 on [0,R], u'(0) = u'(R) = 0.
struct RadialProblem {
  int dimension = 1;
  double radius = 1.0;
  double lambda = 1.0;
  Weight weight;
  Nonlinearity nonlinearity;

  /// Throws Error(InvalidInput) when N < 1, R <= 0, λ <= 0 or the specs are malformed.
  void validate() const;
};

/// N = 2, R = 5, a(r) = cos(|r-5|^{3/2} + 1), g(u) = u^2 + u^3, λ = 0.1.
RadialProblem figure1_problem();

/// a(r) on [0, R]; throws Error(Domain) outside.
double eval_weight(const RadialProblem& problem, double r);

/// ∫_lo^hi r^{N-1} a(r) dr with the product rule on `cells` uniform cells plus
/// every weight breakpoint; exact for piecewise-constant and tabulated weights.
double weighted_integral(const Weight& weight, int dimension, double lo, double hi, int cells);

/// Sampled sup |a| over [0, R].
double weight_sup_norm(const RadialProblem& problem, int samples = 4096);

// ---------------------------------------------------------------------------
// Sign structure
// ---------------------------------------------------------------------------

struct PositivityInterval {
  double sigma = 0.0;
  double tau = 0.0;
  double length() const { return tau - sigma; }
};

struct SignStructure {
  std::vector<PositivityInterval> intervals;
  /// ∫_0^R r^{N-1} a(r) dr
  double weighted_mean = 0.0;
};

struct SignOptions {
  double sign_tol = 1e-10;
  int grid_points = 4096;
  /// Throw MeanConditionViolated when weighted_mean >= 0.
  bool strict_mean = false;
};

SignStructure detect_sign_structure(const RadialProblem& problem, const SignOptions& options = {});

bool check_mean_condition(const SignStructure& structure);

/// Numeric checks of the growth conditions on g and the sign conditions on a.
struct HypothesisReport {
  bool g_positive = true;     // g(0) = 0, g > 0 on samples
  bool g_superlinear_zero = true;
  bool g_regular_zero = true;
  bool g_regular_infinity = true;
  bool weight_has_positive_part = true;
  bool mean_negative = true;
  std::vector<std::string> notes;

  bool nonlinearity_ok() const {
    return g_positive && g_superlinear_zero && g_regular_zero && g_regular_infinity;
  }
  bool weight_ok() const { return weight_has_positive_part && mean_negative; }
};

HypothesisReport check_hypotheses(const RadialProblem& problem, const SignOptions& options = {});

}  // namespace minkrad
