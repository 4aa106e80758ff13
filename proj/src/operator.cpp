#include "minkrad/operator.hpp"

#include <algorithm>
#include <cmath>

#include "minkrad/curvature.hpp"
#include "minkrad/error.hpp"
#include "minkrad/quadrature.hpp"

namespace minkrad {

void HomotopyState::validate() const {
  if (!(theta >= 0.0 && theta <= 1.0)) throw Error(ErrorKind::InvalidInput, "theta must lie in [0, 1]");
  if (!(alpha >= 0.0)) throw Error(ErrorKind::InvalidInput, "alpha must be >= 0");
  if (alpha > 0.0 && !forcing) throw Error(ErrorKind::InvalidInput, "alpha > 0 requires a forcing term v(r)");
}

Weight interval_indicator(std::span<const PositivityInterval> intervals, double radius) {
  PiecewiseConstantWeight w;
  w.values.push_back(intervals.empty() || intervals.front().sigma > 0.0 ? 0.0 : 1.0);
  for (const auto& iv : intervals) {
    if (iv.sigma > 0.0) {
      w.breakpoints.push_back(iv.sigma);
      w.values.push_back(1.0);
    }
    if (iv.tau < radius) {
      w.breakpoints.push_back(iv.tau);
      w.values.push_back(0.0);
    }
  }
  return Weight(std::move(w));
}

std::vector<bool> kink_nodes(const Grid& grid, const Weight& weight, const std::optional<Weight>& forcing) {
  const std::size_t n = grid.size();
  std::vector<bool> kink(n, false);
  kink[0] = true;
  std::vector<double> bps = weight.breakpoints(0.0, grid.radius());
  if (forcing) {
    const auto more = forcing->breakpoints(0.0, grid.radius());
    bps.insert(bps.end(), more.begin(), more.end());
  }
  const auto nodes = grid.nodes();
  const double tol = 1e-12 * grid.radius();
  for (double b : bps) {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), b - tol);
    const auto i = static_cast<std::size_t>(it - nodes.begin());
    if (i < n && std::abs(nodes[i] - b) <= tol) {
      kink[i] = true;
    } else if (i > 0 && i < n) {  // inside cell i-1
      kink[i - 1] = true;
      kink[i] = true;
    }
  }
  return kink;
}

FixedPointOperator::FixedPointOperator(const RadialProblem& problem, Grid grid, HomotopyState state, InnerRule rule)
    : problem_(problem), grid_(std::move(grid)), state_(std::move(state)) {
  problem_.validate();
  state_.validate();
  const int N = problem_.dimension;
  const std::size_t cells = grid_.size() - 1;
  if (rule == InnerRule::ThirdOrder) {
    rules_ = cell_rules(N, grid_.nodes(), kink_nodes(grid_, problem_.weight, state_.forcing));
  } else {
    rules_.resize(cells);
    for (std::size_t j = 0; j < cells; ++j) {
      const auto m = linear_moment(N, grid_[j], grid_[j + 1]);
      rules_[j] = {0.0, m.left, m.right};
    }
  }
  a_left_.resize(cells);
  a_right_.resize(cells);
  v_left_.assign(cells, 0.0);
  v_right_.assign(cells, 0.0);
  for (std::size_t j = 0; j < cells; ++j) {
    a_left_[j] = problem_.weight.right_limit(grid_[j]);
    a_right_[j] = problem_.weight.left_limit(grid_[j + 1]);
    if (state_.forcing) {
      v_left_[j] = state_.forcing->right_limit(grid_[j]);
      v_right_[j] = state_.forcing->left_limit(grid_[j + 1]);
    }
  }
  inv_rpow_.resize(grid_.size());
  inv_rpow_[0] = 0.0;
  for (std::size_t i = 1; i < grid_.size(); ++i) inv_rpow_[i] = std::pow(grid_[i], 1.0 - N);
  inv_Rpow_ = std::pow(grid_.radius(), 1.0 - N);
}

double FixedPointOperator::f_prev(std::size_t j, double u) const { return j == 0 ? 0.0 : f_left(j - 1, u); }
double FixedPointOperator::df_prev(std::size_t j, double u) const { return j == 0 ? 0.0 : df_left(j - 1, u); }
double FixedPointOperator::f_left(std::size_t j, double u) const {
  return extend_f_value(problem_.lambda, a_left_[j], problem_.nonlinearity, u) + state_.alpha * v_left_[j];
}
double FixedPointOperator::f_right(std::size_t j, double u) const {
  return extend_f_value(problem_.lambda, a_right_[j], problem_.nonlinearity, u) + state_.alpha * v_right_[j];
}
double FixedPointOperator::df_left(std::size_t j, double u) const {
  return extend_f_derivative(problem_.lambda, a_left_[j], problem_.nonlinearity, u);
}
double FixedPointOperator::df_right(std::size_t j, double u) const {
  return extend_f_derivative(problem_.lambda, a_right_[j], problem_.nonlinearity, u);
}

std::vector<double> FixedPointOperator::cumulative_integral(std::span<const double> u) const {
  if (u.size() != grid_.size()) throw Error(ErrorKind::InvalidInput, "profile does not match operator grid");
  std::vector<double> W(grid_.size());
  W[0] = 0.0;
  for (std::size_t j = 0; j + 1 < grid_.size(); ++j)
    W[j + 1] = W[j] + (j ? rules_[j].prev * f_prev(j, u[j - 1]) : 0.0) + rules_[j].left * f_left(j, u[j]) +
               rules_[j].right * f_right(j, u[j + 1]);
  return W;
}

std::vector<double> FixedPointOperator::flux_from_integral(std::span<const double> W) const {
  std::vector<double> w(W.size());
  w[0] = 0.0;
  for (std::size_t i = 1; i < W.size(); ++i) w[i] = state_.theta * W[i] * inv_rpow_[i];
  return w;
}

std::vector<double> FixedPointOperator::cumulative_flux(std::span<const double> u) const {
  return flux_from_integral(cumulative_integral(u));
}

GridProfile FixedPointOperator::apply(std::span<const double> u) const {
  const auto W = cumulative_integral(u);
  const auto w = flux_from_integral(W);
  const std::size_t n = grid_.size();
  std::vector<double> Tu(n), dTu(n);
  Tu[0] = u[0] - W[n - 1] * inv_Rpow_;
  dTu[0] = 0.0;
  double prev_s = 1.0;  // sqrt(1 + y_0²), y_0 = 0
  double prev_y = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double y = -w[i];
    const double s = std::hypot(1.0, y);
    // ∫ φ⁻¹ along the linear interpolant: h (y_a + y_b) / (s_a + s_b).
    Tu[i] = Tu[i - 1] + (grid_[i] - grid_[i - 1]) * (prev_y + y) / (prev_s + s);
    dTu[i] = y / s;
    prev_y = y;
    prev_s = s;
  }
  return GridProfile(grid_, std::move(Tu), std::move(dTu));
}

double FixedPointOperator::neumann_defect(std::span<const double> u) const {
  return cumulative_integral(u).back() * inv_Rpow_;
}

std::vector<double> FixedPointOperator::linearize(std::span<const double> u, std::span<const double> h) const {
  const std::size_t n = grid_.size();
  if (h.size() != n) throw Error(ErrorKind::InvalidInput, "direction does not match operator grid");
  const auto w = cumulative_flux(u);
  std::vector<double> dW(n);
  dW[0] = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j)
    dW[j + 1] = dW[j] + (j ? rules_[j].prev * df_prev(j, u[j - 1]) * h[j - 1] : 0.0) +
                rules_[j].left * df_left(j, u[j]) * h[j] + rules_[j].right * df_right(j, u[j + 1]) * h[j + 1];

  std::vector<double> out(n);
  out[0] = h[0] - dW[n - 1] * inv_Rpow_;
  double y_a = 0.0, s_a = 1.0, dy_a = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double y_b = -w[i];
    const double s_b = std::hypot(1.0, y_b);
    const double dy_b = -state_.theta * dW[i] * inv_rpow_[i];
    const double S = s_a + s_b;
    const double P = y_a + y_b;
    const double dS = y_a / s_a * dy_a + y_b / s_b * dy_b;
    out[i] = out[i - 1] + (grid_[i] - grid_[i - 1]) * ((dy_a + dy_b) * S - P * dS) / (S * S);
    y_a = y_b;
    s_a = s_b;
    dy_a = dy_b;
  }
  return out;
}

std::optional<std::vector<double>> FixedPointOperator::solve_linearized(std::span<const double> u,
                                                                      std::span<const double> b) const {
  const std::size_t n = grid_.size();
  if (b.size() != n) throw Error(ErrorKind::InvalidInput, "right-hand side does not match operator grid");
  const auto w = cumulative_flux(u);
  const double theta = state_.theta;

  // h = p + h0 q, tracked for h, dW and δy = -θ r^{1-N} dW.
  std::vector<double> hp(n), hq(n);
  hp[0] = 0.0;
  hq[0] = 1.0;
  double dWp = 0.0, dWq = 0.0, dyp = 0.0, dyq = 0.0;
  double y_a = 0.0, s_a = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = i - 1;
    const double y_b = -w[i];
    const double s_b = std::hypot(1.0, y_b);
    const double S = s_a + s_b, P = y_a + y_b, hc = grid_[i] - grid_[j];
    const double A = hc * (S - P * y_a / s_a) / (S * S);
    const double B = hc * (S - P * y_b / s_b) / (S * S);
    const double dp = j ? rules_[j].prev * df_prev(j, u[j - 1]) : 0.0;
    const double dl = rules_[j].left * df_left(j, u[j]);
    const double dr = rules_[j].right * df_right(j, u[i]);
    const double c = -theta * inv_rpow_[i];
    const double denom = 1.0 - B * c * dr;

    const double partp = dWp + dl * hp[j] + (j ? dp * hp[j - 1] : 0.0);
    const double partq = dWq + dl * hq[j] + (j ? dp * hq[j - 1] : 0.0);
    hp[i] = (b[i] - b[j] + hp[j] + A * dyp + B * c * partp) / denom;
    hq[i] = (hq[j] + A * dyq + B * c * partq) / denom;
    dWp = partp + dr * hp[i];
    dWq = partq + dr * hq[i];
    dyp = c * dWp;
    dyq = c * dWq;
    y_a = y_b;
    s_a = s_b;
  }
  // Mean equation: R^{1-N} dW_M = b_0.
  const double scale = std::max({1.0, std::abs(dWp), std::abs(b[0]) / inv_Rpow_});
  if (!(std::abs(dWq) > 1e-14 * scale) || !std::isfinite(dWq)) return std::nullopt;
  const double h0 = (b[0] / inv_Rpow_ - dWp) / dWq;
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = hp[i] + h0 * hq[i];
  for (double v : h)
    if (!std::isfinite(v)) return std::nullopt;
  return h;
}

// ---------------------------------------------------------------------------

std::vector<double> cumulative_flux(const RadialProblem& problem, const GridProfile& profile, const HomotopyState& state) {
  return FixedPointOperator(problem, profile.grid, state).cumulative_flux(profile.u);
}

GridProfile apply_T(const RadialProblem& problem, const GridProfile& profile, const HomotopyState& state) {
  return FixedPointOperator(problem, profile.grid, state).apply(profile.u);
}

ResidualResult residual(const RadialProblem& problem, const GridProfile& profile, const HomotopyState& state) {
  const auto Tu = apply_T(problem, profile, state);
  std::vector<double> r(profile.u.size()), dr(profile.u.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = profile.u[i] - Tu.u[i];
    dr[i] = profile.du[i] - Tu.du[i];
    sup = std::max(sup, std::abs(r[i]));
  }
  return {GridProfile(profile.grid, std::move(r), std::move(dr)), sup};
}

double neumann_defect(const RadialProblem& problem, const GridProfile& profile, const HomotopyState& state) {
  return FixedPointOperator(problem, profile.grid, state).neumann_defect(profile.u);
}

}  // namespace minkrad
