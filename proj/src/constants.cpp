#include "minkrad/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minkrad/error.hpp"
#include "minkrad/solver.hpp"

namespace minkrad {

namespace {

const double kPhiHalf = 1.0 / std::sqrt(3.0);
constexpr long kLattice = 1L << 20;
constexpr int kTrimCells = 4096;

double epsilon_cap(const SignStructure& s) {
  double cap = std::numeric_limits<double>::infinity();
  for (const auto& iv : s.intervals) cap = std::min(cap, iv.length() / 4.0);
  return cap;
}

bool admissible(const SignStructure& s, const RadialProblem& problem, double eps) {
  for (const auto& iv : s.intervals) {
    if (!(eps < iv.length() / 4.0)) return false;
    if (!(trimmed_integral(problem, iv.sigma + 2 * eps, iv.tau - 2 * eps) > 0.0)) return false;
  }
  return true;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Formula: return "formula";
    case Provenance::Empirical: return "empirical";
    case Provenance::Fallback: return "fallback";
  }
  return "formula";
}

std::string to_string(EpsilonPolicy p) { return p == EpsilonPolicy::Maximal ? "maximal" : "minimize-lambda-star"; }

ClaimContext claim_context(const ConstantsBundle& b) {
  ClaimContext c;
  c.epsilon = b.epsilon;
  c.delta_star = b.delta_star;
  c.gamma = b.gamma;
  for (const auto& d : b.intervals) c.intervals.push_back(d.interval);
  return c;
}

double trimmed_integral(const RadialProblem& problem, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return weighted_integral(problem.weight, problem.dimension, lo, hi, kTrimCells);
}

double choose_epsilon(const SignStructure& s, const RadialProblem& problem, EpsilonPolicy policy) {
  if (s.intervals.empty()) throw Error(ErrorKind::NoPositivityInterval, "weight has no positivity interval");
  const double cap = epsilon_cap(s);
  auto eps_at = [&](long j) { return cap * static_cast<double>(j) / static_cast<double>(kLattice); };
  if (!(cap > 0.0) || !admissible(s, problem, eps_at(1)))
    throw Error(ErrorKind::WeightTooThin, "no admissible epsilon: weight too thin or oscillatory");

  // Admissibility shrinks with ε; bisect for the last admissible lattice point.
  long lo = 1, hi = kLattice - 1;
  if (!admissible(s, problem, eps_at(hi))) {
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      (admissible(s, problem, eps_at(mid)) ? lo : hi) = mid;
    }
  } else {
    lo = hi;
  }
  const long jmax = lo;
  if (policy == EpsilonPolicy::Maximal) return eps_at(jmax);

  auto lambda_at = [&](long j) {
    try {
      return compute_bundle(s, problem, eps_at(j)).lambda_star;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  constexpr long kScan = 256;
  long best = jmax;
  double best_val = lambda_at(jmax);
  const long stride = std::max(1L, jmax / kScan);
  for (long j = stride; j < jmax; j += stride) {
    const double v = lambda_at(j);
    if (v < best_val) {
      best_val = v;
      best = j;
    }
  }
  // Local refinement between the neighbouring scan points.
  const long a = std::max(1L, best - stride), b = std::min(jmax, best + stride);
  const long fine = std::max(1L, (b - a) / 64);
  for (long j = a; j <= b; j += fine) {
    const double v = lambda_at(j);
    if (v < best_val) {
      best_val = v;
      best = j;
    }
  }
  return eps_at(best);
}

double min_g_on(const Nonlinearity& g, double lo, double hi) {
  if (!(hi >= lo) || !(lo >= 0.0)) throw Error(ErrorKind::Domain, "min_g_on needs 0 <= lo <= hi");
  constexpr int kSamples = 1024;
  double best = g(lo), arg = lo;
  int k_best = 0;
  for (int k = 0; k <= kSamples; ++k) {
    const double u = lo + (hi - lo) * k / kSamples;
    const double v = g(u);
    if (v < best) {
      best = v;
      arg = u;
      k_best = k;
    }
  }
  // Golden section on the bracketing sample cells.
  double a = lo + (hi - lo) * std::max(0, k_best - 1) / kSamples;
  double b = lo + (hi - lo) * std::min(kSamples, k_best + 1) / kSamples;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = g(c), fd = g(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = g(d);
    }
  }
  (void)arg;
  return std::min({best, fc, fd});
}

ConstantsBundle compute_bundle(const SignStructure& s, const RadialProblem& problem, double eps) {
  problem.validate();
  if (s.intervals.empty()) throw Error(ErrorKind::NoPositivityInterval, "weight has no positivity interval");
  if (!(eps > 0.0)) throw Error(ErrorKind::InconsistentEpsilon, "epsilon must be positive");
  const int N = problem.dimension;
  const double R = problem.radius;

  ConstantsBundle b;
  b.epsilon = eps;
  b.weighted_mean = s.weighted_mean;
  b.delta_star = std::pow(2.0, N - 1) * std::pow(eps, N) / std::pow(R, N - 1);
  const double e2N = std::pow(2.0 * eps, N);

  b.delta_low = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.intervals.size(); ++i) {
    const auto& iv = s.intervals[i];
    if (!(eps < iv.length() / 4.0))
      throw Error(ErrorKind::InconsistentEpsilon, "epsilon is not below a quarter of every positivity interval");
    IntervalDiagnostics d;
    d.interval = iv;
    d.trimmed_integral = trimmed_integral(problem, iv.sigma + 2 * eps, iv.tau - 2 * eps);
    if (!(d.trimmed_integral > 0.0))
      throw Error(ErrorKind::InconsistentEpsilon, "trimmed integral is not positive for this epsilon");
    const double t2 = std::pow(iv.tau, 2 * N - 2);
    if (i == 0 && iv.sigma == 0.0) {
      const double gamma = std::min(b.delta_star, iv.tau) / 2.0;
      b.gamma = gamma;
      d.delta_low_term =
          (b.delta_star - gamma) / (1.0 + 2 * kPhiHalf * iv.length() * t2 / (std::pow(gamma, N - 1) * e2N));
    } else {
      d.delta_low_term = b.delta_star / (1.0 + 2 * kPhiHalf * iv.length() * t2 / (std::pow(iv.sigma, N - 1) * e2N));
    }
    b.delta_low = std::min(b.delta_low, d.delta_low_term);
    b.intervals.push_back(d);
  }

  b.min_g = min_g_on(problem.nonlinearity, b.delta_low, b.delta_star);
  if (!(b.min_g > 0.0)) throw Error(ErrorKind::InvalidInput, "g vanishes on [delta_low, delta_star]");
  b.lambda_star = 0.0;
  for (auto& d : b.intervals) {
    d.lambda_term = 2.0 * std::pow(R, N - 1) * kPhiHalf / (b.min_g * d.trimmed_integral);
    b.lambda_star = std::max(b.lambda_star, d.lambda_term);
  }
  return b;
}

double estimate_d_star(const RadialProblem& problem, const ConstantsBundle& bundle, const SearchOptions& options,
                       Provenance* provenance) {
  const double ds = bundle.delta_star;
  const Grid grid = Grid::for_problem(problem, options.solve.grid_cells);
  std::vector<double> levels;
  for (double l : geometric_levels(std::min(options.floor, ds), ds, options.levels_per_decade))
    if (l < ds) levels.push_back(l);

  double collapse = 0.0;  // largest level with every lower level collapsing, all θ
  double smallest = std::numeric_limits<double>::infinity();
  bool contiguous = true;
  for (double l : levels) {
    bool all_trivial = true;
    for (double th : options.theta_samples) {
      HomotopyState st;
      st.theta = th;
      FixedPointOperator op(problem, grid, st);
      auto res = solve(op, std::vector<double>(grid.size(), l), options.solve);
      const bool trivial = res.report.converged && res.report.sup_norm < options.solve.trivial_level;
      if (!trivial) all_trivial = false;
      if (res.report.converged && !trivial && res.report.min_u > 0.0) smallest = std::min(smallest, res.report.sup_norm);
    }
    if (all_trivial && contiguous) collapse = l;
    else contiguous = false;
  }
  if (!(collapse > 0.0)) {
    if (provenance) *provenance = Provenance::Fallback;
    return ds * 1e-3;
  }
  if (provenance) *provenance = Provenance::Empirical;
  return 0.5 * std::min({collapse, smallest, ds});
}

double estimate_D_star(const RadialProblem& problem, double base_level, const SearchOptions& options) {
  return grow_ceiling(problem, base_level, options).ceiling;
}

ConstantsBundle compute_constants(const RadialProblem& problem, const ConstantsOptions& options) {
  problem.validate();
  const SignStructure s = detect_sign_structure(problem, options.sign);
  if (!check_mean_condition(s))
    throw Error(ErrorKind::MeanConditionViolated, "weighted mean of the weight is not negative");
  const double eps = options.epsilon ? *options.epsilon : choose_epsilon(s, problem, options.policy);
  ConstantsBundle b = compute_bundle(s, problem, eps);
  b.policy = options.policy;
  if (options.estimate_bounds) {
    SearchOptions so;
    so.solve.grid_cells = options.grid_cells;
    Provenance pv = Provenance::Empirical;
    b.d_star = estimate_d_star(problem, b, so, &pv);
    b.d_star_provenance = pv;
    b.D_star = estimate_D_star(problem, b.delta_star, so);
    b.D_star_provenance = Provenance::Empirical;
  }
  return b;
}

}  // namespace minkrad
