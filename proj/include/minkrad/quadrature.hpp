#pragma once

#include <span>
#include <vector>

namespace minkrad {

/// Weights of the product rule ∫_a^b ξ^{N-1} h(ξ) dξ ≈ left·h(a) + right·h(b),
/// exact when h is linear on [a,b]. The moments are expanded binomially around
/// `a` so that no cancellation occurs for narrow cells far from the origin.
struct LinearMoment {
  double left = 0.0;
  double right = 0.0;
};

LinearMoment linear_moment(int dimension, double a, double b);

/// ∫_a^b ξ^{N-1} dξ
double power_moment(int dimension, double a, double b);

/// ∫_a^b ξ^{N-1} (ξ-a)(b-ξ)/2 dξ
double curvature_moment(int dimension, double a, double b);

/// Per-cell weights of a third-order rule for ∫_{r_j}^{r_{j+1}} ξ^{N-1} h(ξ) dξ:
///   prev·h(r_{j-1}) + left·h(r_j) + right·h(r_{j+1}).
/// The linear-moment rule minus curvature_moment times the second divided
/// difference at r_j. Cells starting at the origin or at a node flagged in
/// `kink` keep the linear-moment rule (prev = 0).
struct CellRule {
  double prev = 0.0;
  double left = 0.0;
  double right = 0.0;
};

std::vector<CellRule> cell_rules(int dimension, std::span<const double> nodes, const std::vector<bool>& kink);

}  // namespace minkrad
