#pragma once

#include <optional>
#include <span>
#include <vector>

#include "minkrad/grid.hpp"
#include "minkrad/problem.hpp"
#include "minkrad/quadrature.hpp"

namespace minkrad {

/// Deformation parameters of the family
///   (r^{N-1} φ(u'))' + θ r^{N-1} [f(r,u) + α v(r)] = 0,  u'(0) = u'(R) = 0.
struct HomotopyState {
  double theta = 1.0;
  double alpha = 0.0;
  /// v(r) >= 0; required when alpha > 0.
  std::optional<Weight> forcing;

  void validate() const;
};

/// Indicator function of the union of positivity intervals, as a piecewise-constant weight.
Weight interval_indicator(std::span<const PositivityInterval> intervals, double radius);

enum class InnerRule {
  Linear,     // linear-moment product rule, second order
  ThirdOrder, // plus curvature correction, see cell_rules
};

/// Nodes where the weight (or the forcing) jumps or kinks, plus nodes adjacent to
/// a breakpoint that falls strictly inside a cell.
std::vector<bool> kink_nodes(const Grid& grid, const Weight& weight, const std::optional<Weight>& forcing);

/// Discretization of the fixed-point operator
///
///   (T u)(r) = u(0) - R^{1-N} ∫_0^R ζ^{N-1} [f + αv] dζ + ∫_0^r φ⁻¹(-w(ζ)) dζ,
///   w(r)     = θ r^{1-N} ∫_0^r ξ^{N-1} [f + αv] dξ,   w(0) = 0.
///
/// Inner integrals use exact ξ^{N-1} moments of the linear interpolant of f + αv
/// (plus a curvature correction by default), with one-sided weight values at cell ends. The outer
/// integral integrates φ⁻¹ exactly along the linear interpolant of w, which keeps
/// second order even where the slope saturates inside a single cell.
class FixedPointOperator {
 public:
  FixedPointOperator(const RadialProblem& problem, Grid grid, HomotopyState state,
                     InnerRule rule = InnerRule::ThirdOrder);

  const Grid& grid() const { return grid_; }
  const HomotopyState& state() const { return state_; }
  const RadialProblem& problem() const { return problem_; }

  /// W_i = ∫_0^{r_i} ξ^{N-1} [f + αv] dξ at every node.
  std::vector<double> cumulative_integral(std::span<const double> u) const;

  /// w at every node.
  std::vector<double> cumulative_flux(std::span<const double> u) const;

  /// T u with du filled from (T u)' = φ⁻¹(-w), du[0] = 0.
  GridProfile apply(std::span<const double> u) const;

  /// R^{1-N} ∫_0^R ζ^{N-1} [f + αv] dζ
  double neumann_defect(std::span<const double> u) const;

  /// Directional derivative DT[u] h of the discrete operator.
  std::vector<double> linearize(std::span<const double> u, std::span<const double> h) const;

  /// Solves (I - DT[u]) h = b. The Jacobian is lower triangular apart from the
  /// dependence on h(0) and the mean term, so a forward sweep affine in h(0)
  /// plus the scalar mean equation gives h in O(M). Returns nullopt when the
  /// mean equation is degenerate (e.g. u ≡ 0 with g'(0) = 0).
  std::optional<std::vector<double>> solve_linearized(std::span<const double> u, std::span<const double> b) const;

 private:
  double f_prev(std::size_t j, double u) const;   // f at r_{j-1} inside cell j-1
  double f_left(std::size_t j, double u) const;   // f at the left end of cell j
  double f_right(std::size_t j, double u) const;  // f at the right end of cell j
  double df_prev(std::size_t j, double u) const;
  double df_left(std::size_t j, double u) const;
  double df_right(std::size_t j, double u) const;
  std::vector<double> flux_from_integral(std::span<const double> W) const;

  RadialProblem problem_;
  Grid grid_;
  HomotopyState state_;
  std::vector<CellRule> rules_;                     // per cell
  std::vector<double> a_left_, a_right_;            // a(r_j^+), a(r_{j+1}^-) per cell
  std::vector<double> v_left_, v_right_;            // forcing, same convention
  std::vector<double> inv_rpow_;                    // r_i^{1-N} (0 at the origin)
  double inv_Rpow_ = 1.0;
};

std::vector<double> cumulative_flux(const RadialProblem& problem, const GridProfile& profile, const HomotopyState& state);

GridProfile apply_T(const RadialProblem& problem, const GridProfile& profile, const HomotopyState& state);

struct ResidualResult {
  GridProfile residual;  // u - T u nodewise, du holds u' - (T u)'
  double sup_norm = 0.0;
};

ResidualResult residual(const RadialProblem& problem, const GridProfile& profile, const HomotopyState& state);

double neumann_defect(const RadialProblem& problem, const GridProfile& profile, const HomotopyState& state = {});

}  // namespace minkrad
