#include "minkrad/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minkrad/curvature.hpp"
#include "minkrad/error.hpp"
#include "minkrad/operator.hpp"
#include "minkrad/quadrature.hpp"

namespace minkrad {

Tolerances Tolerances::interpolated() {
  Tolerances t;
  t.integral_rel = t.ode_rel;
  return t;
}

namespace {

const double kPhiHalf = 1.0 / std::sqrt(3.0);

// Profile resampled on nodes + midpoints + weight breakpoints, values from the
// cubic Hermite interpolant of (u, u') on each original cell.
struct Refined {
  std::vector<double> r, u;
  std::vector<std::size_t> node_index;  // position of original node i in r
};

double hermite(double ra, double rb, double ua, double ub, double da, double db, double r) {
  const double h = rb - ra;
  const double t = (r - ra) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * ua + (t3 - 2 * t2 + t) * h * da + (-2 * t3 + 3 * t2) * ub + (t3 - t2) * h * db;
}

Refined refine(const RadialProblem& problem, const GridProfile& p) {
  Refined out;
  const auto& g = p.grid;
  const std::size_t n = g.size();
  out.node_index.resize(n);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double a = g[j], b = g[j + 1];
    out.node_index[j] = out.r.size();
    out.r.push_back(a);
    out.u.push_back(p.u[j]);
    std::vector<double> inner = problem.weight.breakpoints(a, b);
    inner.push_back(0.5 * (a + b));
    std::sort(inner.begin(), inner.end());
    for (double r : inner) {
      if (r <= out.r.back() || r >= b) continue;
      out.r.push_back(r);
      out.u.push_back(hermite(a, b, p.u[j], p.u[j + 1], p.du[j], p.du[j + 1], r));
    }
  }
  out.node_index[n - 1] = out.r.size();
  out.r.push_back(g[n - 1]);
  out.u.push_back(p.u[n - 1]);
  return out;
}

// ∫_0^R ξ^{N-1} |f| dξ, linear-moment rule.
double absolute_integral(const RadialProblem& problem, const GridProfile& p) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < p.grid.size(); ++k) {
    const auto m = linear_moment(problem.dimension, p.grid[k], p.grid[k + 1]);
    acc += m.left * std::abs(extend_f_value(problem.lambda, problem.weight.right_limit(p.grid[k]), problem.nonlinearity, p.u[k])) +
           m.right * std::abs(extend_f_value(problem.lambda, problem.weight.left_limit(p.grid[k + 1]), problem.nonlinearity,
                                             p.u[k + 1]));
  }
  return acc;
}

// ∫_0^{r_k} ξ^{N-1} f dξ with the operator's third-order cell rule.
std::vector<double> cumulative_W(const RadialProblem& problem, const Grid& g, const std::vector<double>& u) {
  const std::size_t n = g.size();
  const auto rules = cell_rules(problem.dimension, g.nodes(), kink_nodes(g, problem.weight, std::nullopt));
  std::vector<double> W(n, 0.0);
  double fprev = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double fl = extend_f_value(problem.lambda, problem.weight.right_limit(g[k]), problem.nonlinearity, u[k]);
    const double fr = extend_f_value(problem.lambda, problem.weight.left_limit(g[k + 1]), problem.nonlinearity, u[k + 1]);
    W[k + 1] = W[k] + rules[k].prev * fprev + rules[k].left * fl + rules[k].right * fr;
    fprev = fl;
  }
  return W;
}

double in_range_min(const GridProfile& p, double lo, double hi, bool& any) {
  double m = std::numeric_limits<double>::infinity();
  any = false;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    if (p.grid[i] < lo || p.grid[i] > hi) continue;
    m = std::min(m, p.u[i]);
    any = true;
  }
  return m;
}

double in_range_max(const GridProfile& p, double lo, double hi) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.grid.size(); ++i)
    if (p.grid[i] >= lo && p.grid[i] <= hi) m = std::max(m, p.u[i]);
  return m;
}

}  // namespace

double integral_balance(const RadialProblem& problem, const GridProfile& p) {
  const double magnitude = absolute_integral(problem, p);
  return magnitude > 0.0 ? std::abs(cumulative_W(problem, p.grid, p.u).back()) / magnitude : 0.0;
}

double flux_monotonicity_violation(const RadialProblem& problem, const GridProfile& p) {
  const int N = problem.dimension;
  double worst = 0.0;
  double prev = 0.0;
  for (std::size_t i = 1; i < p.grid.size(); ++i) {
    const double s = std::clamp(p.du[i], -1.0 + kSlopeGuard, 1.0 - kSlopeGuard);
    const double flux = std::pow(p.grid[i], N - 1) * s / std::sqrt((1.0 - s) * (1.0 + s));
    const double al = problem.weight.right_limit(p.grid[i - 1]);
    const double ar = problem.weight.left_limit(p.grid[i]);
    if (al >= 0.0 && ar >= 0.0) worst = std::max(worst, flux - prev);
    else if (al <= 0.0 && ar <= 0.0) worst = std::max(worst, prev - flux);
    prev = flux;
  }
  return worst;
}

ClaimCheck check_slope_bound(const GridProfile& p, const ClaimContext& ctx, double slack, int N) {
  ClaimCheck c{"slope_bound_trimmed", true, 0, 0, std::numeric_limits<double>::infinity()};
  const double denom = std::pow(2.0 * ctx.epsilon, N);
  for (const auto& iv : ctx.intervals) {
    const double lo = iv.sigma + 2 * ctx.epsilon, hi = iv.tau - 2 * ctx.epsilon;
    const double k = std::pow(iv.tau, N - 1) / denom;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
      if (p.grid[i] < lo || p.grid[i] > hi) continue;
      const double margin = k * p.u[i] - std::abs(p.du[i]);
      ++c.points;
      c.worst_margin = std::min(c.worst_margin, margin);
      if (margin < -(slack + 1e-6 * std::abs(p.du[i]))) ++c.violations;
    }
  }
  if (c.points == 0) c.worst_margin = 0.0;
  return c;
}

ClaimCheck check_half_slope(const GridProfile& p, const ClaimContext& ctx, double slack) {
  ClaimCheck c{"half_slope_trimmed", p.sup_norm() <= ctx.delta_star, 0, 0, std::numeric_limits<double>::infinity()};
  if (!c.applicable) {
    c.worst_margin = 0.0;
    return c;
  }
  for (const auto& iv : ctx.intervals) {
    const double lo = iv.sigma + 2 * ctx.epsilon, hi = iv.tau - 2 * ctx.epsilon;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
      if (p.grid[i] < lo || p.grid[i] > hi) continue;
      const double margin = 0.5 - std::abs(p.du[i]);
      ++c.points;
      c.worst_margin = std::min(c.worst_margin, margin);
      if (margin < -slack) ++c.violations;
    }
  }
  if (c.points == 0) c.worst_margin = 0.0;
  return c;
}

ClaimCheck check_lower_bound(const GridProfile& p, const ClaimContext& ctx, double slack, int N, double radius) {
  (void)radius;
  const double D = p.sup_norm();
  ClaimCheck c{"trimmed_lower_bound", D >= 0.9 * ctx.delta_star && D <= ctx.delta_star, 0, 0, 0.0};
  if (!c.applicable) return c;
  c.worst_margin = std::numeric_limits<double>::infinity();
  const double e2N = std::pow(2.0 * ctx.epsilon, N);
  bool located = false;
  for (std::size_t k = 0; k < ctx.intervals.size(); ++k) {
    const auto& iv = ctx.intervals[k];
    if (in_range_max(p, iv.sigma, iv.tau) < D * (1.0 - 1e-9)) continue;
    located = true;
    const double twoN2 = std::pow(iv.tau, 2 * N - 2);
    double bound;
    if (k == 0 && iv.sigma == 0.0 && ctx.gamma) {
      const double g = *ctx.gamma;
      bound = (D - g) / (1.0 + 2 * kPhiHalf * iv.length() * twoN2 / (std::pow(g, N - 1) * e2N));
    } else {
      bound = D / (1.0 + 2 * kPhiHalf * iv.length() * twoN2 / (std::pow(iv.sigma, N - 1) * e2N));
    }
    bool any = false;
    const double m = in_range_min(p, iv.sigma + 2 * ctx.epsilon, iv.tau - 2 * ctx.epsilon, any);
    if (!any) continue;
    ++c.points;
    c.worst_margin = std::min(c.worst_margin, m - bound);
    if (m - bound < -slack) ++c.violations;
  }
  if (!located) {
    ++c.points;
    ++c.violations;
  }
  if (c.points == 0) c.worst_margin = 0.0;
  return c;
}

Certificate certify(const RadialProblem& problem, const GridProfile& p, const Tolerances& tol,
                    const std::optional<ClaimContext>& context) {
  problem.validate();
  const std::size_t n = p.grid.size();
  if (p.u.size() != n || p.du.size() != n) throw Error(ErrorKind::InvalidInput, "profile is missing samples");
  const int N = problem.dimension;
  const double R = problem.radius;
  if (std::abs(p.grid.radius() - R) > 1e-12 * R) throw Error(ErrorKind::InvalidInput, "profile grid does not span [0, R]");

  Certificate c;
  c.sup_u = p.sup_norm();
  c.min_u = p.min_value();
  c.max_abs_slope = p.max_abs_slope();
  c.trivial = c.sup_u < tol.trivial_level;

  double gmax = 0.0;
  for (double v : p.u) gmax = std::max(gmax, problem.nonlinearity(std::max(v, 0.0)));
  c.scale = 1.0 + problem.lambda * weight_sup_norm(problem) * gmax;

  c.ode_tolerance = tol.ode_rel * c.scale;
  c.profile_tolerance = tol.ode_rel * c.scale * R;
  c.integral_tolerance = tol.integral_rel * c.scale;
  c.boundary_tolerance = tol.boundary;
  c.slope_limit = 1.0 - tol.slope_margin;

  // Refined cumulative integral W and flux w.
  const Refined ref = refine(problem, p);
  const std::size_t m = ref.r.size();
  const std::vector<double> W = cumulative_W(problem, Grid(ref.r), ref.u);
  std::vector<double> w(m, 0.0);
  for (std::size_t k = 1; k < m; ++k) w[k] = W[k] * std::pow(ref.r[k], 1.0 - N);

  // ODE residual φ(u') + w at the original nodes.
  c.ode_residual_sup = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double s = p.du[i];
    double res;
    if (std::abs(s) >= 1.0 - kSlopeGuard) res = std::numeric_limits<double>::infinity();
    else res = std::abs(phi(s) + w[ref.node_index[i]]);
    c.ode_residual_sup = std::max(c.ode_residual_sup, res);
  }

  // u(r) - u(0) against ∫ φ⁻¹(-w), exact along the linear interpolant of w.
  {
    double acc = 0.0;
    std::size_t next = 1;
    for (std::size_t k = 0; k + 1 < m; ++k) {
      const double ya = -w[k], yb = -w[k + 1];
      acc += (ref.r[k + 1] - ref.r[k]) * (ya + yb) / (std::hypot(1.0, ya) + std::hypot(1.0, yb));
      if (next < n && ref.node_index[next] == k + 1) {
        c.profile_consistency = std::max(c.profile_consistency, std::abs(p.u[next] - p.u[0] - acc));
        ++next;
      }
    }
  }

  c.neumann_defect_0 = p.du[0];
  c.neumann_defect_R = p.du[n - 1];

  // Integral identity on the profile's own grid.
  c.integral_identity = cumulative_W(problem, p.grid, p.u).back() * std::pow(R, 1.0 - N);
  c.balance_ratio = integral_balance(problem, p);
  c.balance_tolerance = tol.balance_rel;

  const double flux_slack = tol.ode_rel * c.scale * std::pow(R, N - 1);
  c.flux_worst_violation = flux_monotonicity_violation(problem, p);
  c.flux_monotone = c.trivial || c.flux_worst_violation <= flux_slack;

  if (context && !c.trivial) {
    c.claims.push_back(check_slope_bound(p, *context, tol.claim_slack, N));
    c.claims.push_back(check_half_slope(p, *context, tol.claim_slack));
    c.claims.push_back(check_lower_bound(p, *context, tol.claim_slack, N, R));
  }

  auto fail = [&](bool bad, const std::string& what) {
    if (bad) c.failures.push_back(what);
  };
  fail(!(c.ode_residual_sup <= c.ode_tolerance), "ode_residual");
  fail(!(c.profile_consistency <= c.profile_tolerance), "profile_consistency");
  fail(!(std::abs(c.neumann_defect_0) <= c.boundary_tolerance), "neumann_defect_0");
  fail(!(std::abs(c.neumann_defect_R) <= c.boundary_tolerance), "neumann_defect_R");
  fail(!(std::abs(c.integral_identity) <= c.integral_tolerance), "integral_identity");
  fail(!c.trivial && !(c.balance_ratio <= c.balance_tolerance), "integral_balance");
  fail(!(c.max_abs_slope <= c.slope_limit), "slope");
  fail(!c.trivial && !(c.min_u > 0.0), "positivity");
  fail(!c.flux_monotone, "flux_monotone");
  for (const auto& cl : c.claims) fail(!cl.passed(), cl.name);
  c.overall = c.failures.empty();
  return c;
}

}  // namespace minkrad
