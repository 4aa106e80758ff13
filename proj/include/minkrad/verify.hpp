#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minkrad/grid.hpp"
#include "minkrad/problem.hpp"

namespace minkrad {

struct Tolerances {
  double ode_rel = 1e-6;       // |φ(u') + w| ≤ ode_rel · scale
  double integral_rel = 1e-8;  // |R^{1-N} ∫ ζ^{N-1} f| ≤ integral_rel · scale
  double boundary = 1e-8;      // |u'(0)|, |u'(R)|
  double slope_margin = 1e-9;  // |u'| ≤ 1 - slope_margin
  double trivial_level = 1e-6; // ‖u‖∞ below this counts as the trivial solution
  double claim_slack = 1e-9;   // absolute slack on the pointwise a-priori bounds
  /// Nontrivial profiles: |∫ ζ^{N-1} f| ≤ balance_rel · ∫ ζ^{N-1} |f|. Rejects near-constant
  /// profiles that pass the absolute checks only because λ g(u) is tiny.
  double balance_rel = 1e-6;

  /// For profiles sampled from another discretization (shooting, CSV input):
  /// the integral identity is checked at the ODE tolerance.
  static Tolerances interpolated();
};

/// Data needed by the a-priori estimates on the positivity intervals.
struct ClaimContext {
  double epsilon = 0.0;
  double delta_star = 0.0;
  std::optional<double> gamma;  // set when the first interval starts at 0
  std::vector<PositivityInterval> intervals;
};

struct ClaimCheck {
  std::string name;
  bool applicable = false;
  long points = 0;
  long violations = 0;
  double worst_margin = 0.0;  // min over points of (bound - value); >= -slack passes
  bool passed() const { return !applicable || violations == 0; }
};

struct Certificate {
  double scale = 1.0;  // 1 + λ ‖a‖∞ max g(u)

  double ode_residual_sup = 0.0;
  double ode_tolerance = 0.0;
  double profile_consistency = 0.0;  // sup |u - u(0) - ∫ φ⁻¹(-w)|
  double profile_tolerance = 0.0;

  double neumann_defect_0 = 0.0;
  double neumann_defect_R = 0.0;
  double boundary_tolerance = 0.0;

  double integral_identity = 0.0;
  double integral_tolerance = 0.0;
  double balance_ratio = 0.0;  // |∫ ζ^{N-1} f| / ∫ ζ^{N-1} |f|
  double balance_tolerance = 0.0;

  double min_u = 0.0;
  double sup_u = 0.0;
  double max_abs_slope = 0.0;
  double slope_limit = 1.0;

  bool trivial = false;
  bool flux_monotone = true;
  double flux_worst_violation = 0.0;
  std::vector<ClaimCheck> claims;

  bool overall = false;
  std::vector<std::string> failures;
};

/// Solution certificate for θ = 1, α = 0. Never throws on a failing profile;
/// failures are listed in the certificate.
Certificate certify(const RadialProblem& problem, const GridProfile& profile, const Tolerances& tolerances = {},
                    const std::optional<ClaimContext>& context = std::nullopt);

/// |∫_0^R ζ^{N-1} f| / ∫_0^R ζ^{N-1} |f| for θ = 1, α = 0 (0 when f ≡ 0).
double integral_balance(const RadialProblem& problem, const GridProfile& profile);

/// Flux r^{N-1} φ(u') is non-increasing where a ≥ 0 and non-decreasing where a ≤ 0.
/// Returns the worst violation (0 when monotone); `slack` absorbs rounding.
double flux_monotonicity_violation(const RadialProblem& problem, const GridProfile& profile);

/// |u'| ≤ τ^{N-1}/(2ε)^N · u on each trimmed interval; when ‖u‖∞ ≤ δ* also |u'| ≤ 1/2.
ClaimCheck check_slope_bound(const GridProfile& profile, const ClaimContext& context, double slack, int dimension);
ClaimCheck check_half_slope(const GridProfile& profile, const ClaimContext& context, double slack);

/// Lower bound on trimmed-interval minima for solutions with ‖u‖∞ = D ∈ [0.9δ*, δ*].
ClaimCheck check_lower_bound(const GridProfile& profile, const ClaimContext& context, double slack, int dimension,
                             double radius);

}  // namespace minkrad
