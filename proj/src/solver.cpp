#include "minkrad/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "minkrad/error.hpp"

namespace minkrad {

void SolveOptions::validate() const {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "tol must be positive");
  if (max_iter < 1) throw Error(ErrorKind::InvalidInput, "max_iter must be >= 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw Error(ErrorKind::InvalidInput, "damping must lie in (0, 1]");
  if (acceleration_depth < 0) throw Error(ErrorKind::InvalidInput, "acceleration_depth must be >= 0");
  if (grid_cells < 2) throw Error(ErrorKind::InvalidInput, "grid_cells must be >= 2");
  if (!(start_level >= 0.0) && !start_profile) throw Error(ErrorKind::InvalidInput, "start_level must be >= 0");
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Trivial: return "trivial";
    case Classification::Small: return "small";
    case Classification::MiddleExcluded: return "middle-excluded";
    case Classification::Large: return "large";
    case Classification::Unclassified: return "unclassified";
  }
  return "unclassified";
}

std::string to_string(SolveMethod m) { return m == SolveMethod::Newton ? "newton" : "anderson-picard"; }

Brackets Brackets::from(const ConstantsBundle& b) {
  Brackets out;
  out.d_star = b.d_star.value_or(0.0);
  out.delta_star = b.delta_star;
  out.D_star = b.D_star;
  out.gap = 1e-3 * b.delta_star;
  return out;
}

Classification classify(double norm, double trivial_level, const std::optional<Brackets>& br) {
  if (norm < trivial_level) return Classification::Trivial;
  if (!br) return Classification::Unclassified;
  if (norm < br->delta_star - br->gap) return Classification::Small;
  if (norm <= br->delta_star + br->gap) return Classification::MiddleExcluded;
  return Classification::Large;
}

namespace {

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Eval {
  std::vector<double> F;  // u - T u
  std::vector<double> dTu;
  double norm = 0.0;
};

Eval evaluate(const FixedPointOperator& op, std::span<const double> u) {
  const GridProfile Tu = op.apply(u);
  Eval e;
  e.F.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) e.F[i] = u[i] - Tu.u[i];
  e.dTu = Tu.du;
  e.norm = sup_abs(e.F);
  if (!std::isfinite(e.norm)) e.norm = std::numeric_limits<double>::infinity();
  return e;
}

SolveResult finish(const FixedPointOperator& op, std::vector<double> u, const Eval& e, int iterations, bool converged,
                   bool oscillation, std::string message, const SolveOptions& opt,
                   const std::optional<Brackets>& br) {
  SolveResult out;
  out.profile = GridProfile(op.grid(), std::move(u), e.dTu);
  auto& r = out.report;
  r.converged = converged;
  r.oscillation = oscillation;
  r.iterations = iterations;
  r.final_residual = e.norm;
  r.sup_norm = out.profile.sup_norm();
  r.min_u = out.profile.min_value();
  r.max_abs_slope = out.profile.max_abs_slope();
  r.classification = converged ? classify(r.sup_norm, opt.trivial_level, br) : Classification::Unclassified;
  r.message = std::move(message);
  return out;
}

SolveResult newton(const FixedPointOperator& op, std::vector<double> u, const SolveOptions& opt,
                   const std::optional<Brackets>& br) {
  Eval e = evaluate(op, u);
  double last_step = std::numeric_limits<double>::infinity();
  std::vector<double> best = u;
  Eval best_e = e;
  for (int it = 0; it < opt.max_iter; ++it) {
    const double unorm = sup_abs(u);
    if (e.norm <= opt.tol && (last_step <= opt.step_factor * opt.tol * (1.0 + unorm) || unorm < opt.trivial_level))
      return finish(op, std::move(u), e, it, true, false, "converged", opt, br);

    std::vector<double> rhs(e.F.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -e.F[i];
    auto step = op.solve_linearized(u, rhs);
    if (step) {
      // One pass of iterative refinement against the forward linearization.
      const auto Jh = op.linearize(u, *step);
      std::vector<double> r(rhs.size());
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - ((*step)[i] - Jh[i]);
      if (auto corr = op.solve_linearized(u, r))
        for (std::size_t i = 0; i < r.size(); ++i) (*step)[i] += (*corr)[i];
    } else {
      step = rhs;  // Picard direction
      for (double& v : *step) v *= opt.damping;
    }

    const double floor = 64 * std::numeric_limits<double>::epsilon() * (1.0 + unorm);
    double t = 1.0;
    bool accepted = false;
    std::vector<double> trial(u.size());
    Eval te;
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + t * (*step)[i];
      te = evaluate(op, trial);
      if (te.norm <= (1.0 - 1e-4 * t) * e.norm || te.norm <= floor) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      const bool ok = e.norm <= opt.tol;
      return finish(op, std::move(u), e, it + 1, ok, !ok, ok ? "converged (step stalled at tolerance)" : "line search stalled",
                    opt, br);
    }
    last_step = t * sup_abs(*step);
    u.swap(trial);
    e = std::move(te);
    if (e.norm < best_e.norm) {
      best = u;
      best_e = e;
    }
  }
  const double unorm = sup_abs(u);
  if (e.norm <= opt.tol && (last_step <= opt.step_factor * opt.tol * (1.0 + unorm) || unorm < opt.trivial_level))
    return finish(op, std::move(u), e, opt.max_iter, true, false, "converged", opt, br);
  return finish(op, std::move(best), best_e, opt.max_iter, false, false, "max_iter reached", opt, br);
}

SolveResult anderson(const FixedPointOperator& op, std::vector<double> u, const SolveOptions& opt,
                     const std::optional<Brackets>& br) {
  const std::size_t n = u.size();
  const int depth = opt.acceleration_depth;
  const double beta = opt.damping;
  std::deque<Eigen::VectorXd> dG, dFk;  // differences of G(u) and of f = G(u) - u
  Eigen::VectorXd prev_g, prev_f;
  std::vector<double> best = u;
  Eval e = evaluate(op, u);
  Eval best_e = e;
  int stall = 0;
  for (int it = 0; it < opt.max_iter; ++it) {
    if (e.norm <= opt.tol) return finish(op, std::move(u), e, it, true, false, "converged", opt, br);
    Eigen::Map<const Eigen::VectorXd> uv(u.data(), n);
    Eigen::Map<const Eigen::VectorXd> F(e.F.data(), n);
    Eigen::VectorXd g = uv - beta * F;  // (1-β)u + βTu
    Eigen::VectorXd f = g - uv;
    if (prev_g.size() == static_cast<Eigen::Index>(n) && depth > 0) {
      dG.push_back(g - prev_g);
      dFk.push_back(f - prev_f);
      if (static_cast<int>(dG.size()) > depth) {
        dG.pop_front();
        dFk.pop_front();
      }
    }
    prev_g = g;
    prev_f = f;
    Eigen::VectorXd next = g;
    if (!dG.empty()) {
      const Eigen::Index m = static_cast<Eigen::Index>(dG.size());
      Eigen::MatrixXd Fm(n, m), Gm(n, m);
      for (Eigen::Index k = 0; k < m; ++k) {
        Fm.col(k) = dFk[k];
        Gm.col(k) = dG[k];
      }
      const Eigen::VectorXd gamma = Fm.colPivHouseholderQr().solve(f);
      if (gamma.allFinite()) next = g - Gm * gamma;
    }
    std::vector<double> nu(next.data(), next.data() + n);
    Eval ne = evaluate(op, nu);
    if (!std::isfinite(ne.norm)) {
      dG.clear();
      dFk.clear();
      nu.assign(g.data(), g.data() + n);
      ne = evaluate(op, nu);
    }
    stall = ne.norm < best_e.norm ? 0 : stall + 1;
    u.swap(nu);
    e = std::move(ne);
    if (e.norm < best_e.norm) {
      best = u;
      best_e = e;
    }
    if (stall > 20) return finish(op, std::move(best), best_e, it + 1, false, true, "oscillation detected", opt, br);
  }
  if (e.norm <= opt.tol) return finish(op, std::move(u), e, opt.max_iter, true, false, "converged", opt, br);
  return finish(op, std::move(best), best_e, opt.max_iter, false, false, "max_iter reached", opt, br);
}

}  // namespace

SolveResult solve(const FixedPointOperator& op, std::vector<double> start, const SolveOptions& options,
                  const std::optional<Brackets>& brackets) {
  options.validate();
  if (start.size() != op.grid().size()) throw Error(ErrorKind::InvalidInput, "start does not match operator grid");
  if (options.method == SolveMethod::Newton) return newton(op, std::move(start), options, brackets);
  return anderson(op, std::move(start), options, brackets);
}

SolveResult solve(const RadialProblem& problem, const HomotopyState& state, const SolveOptions& options,
                  const std::optional<Brackets>& brackets) {
  options.validate();
  if (options.start_profile) {
    FixedPointOperator op(problem, options.start_profile->grid, state);
    return solve(op, options.start_profile->u, options, brackets);
  }
  FixedPointOperator op(problem, Grid::for_problem(problem, options.grid_cells), state);
  return solve(op, std::vector<double>(op.grid().size(), options.start_level), options, brackets);
}

std::vector<HomotopyStep> homotopy_path(const RadialProblem& problem, const HomotopyState& from, const HomotopyState& to,
                                        int steps, const SolveOptions& options) {
  if (steps < 1) throw Error(ErrorKind::InvalidInput, "steps must be >= 1");
  from.validate();
  to.validate();
  const Grid grid = options.start_profile ? options.start_profile->grid : Grid::for_problem(problem, options.grid_cells);
  std::vector<double> u = options.start_profile ? options.start_profile->u
                                                : std::vector<double>(grid.size(), options.start_level);
  std::optional<Weight> forcing = to.forcing ? to.forcing : from.forcing;
  std::vector<HomotopyStep> path;
  const bool same = from.theta == to.theta && from.alpha == to.alpha;
  const int count = same ? 0 : steps;
  for (int k = 0; k <= count; ++k) {
    const double s = count == 0 ? 0.0 : static_cast<double>(k) / count;
    HomotopyState st;
    st.theta = from.theta + s * (to.theta - from.theta);
    st.alpha = from.alpha + s * (to.alpha - from.alpha);
    st.forcing = forcing;
    FixedPointOperator op(problem, grid, st);
    auto res = solve(op, u, options);
    if (!res.report.converged) {
      if (k == 0) throw Error(ErrorKind::InvalidInput, "homotopy diverges at its starting state: " + res.report.message);
      break;
    }
    u = res.profile.u;
    path.push_back({std::move(st), std::move(res.profile), std::move(res.report)});
  }
  return path;
}

// ---------------------------------------------------------------------------

std::vector<double> geometric_levels(double floor, double ceiling, int per_decade) {
  if (!(floor > 0.0) || !(ceiling >= floor) || per_decade < 1)
    throw Error(ErrorKind::InvalidInput, "invalid geometric ladder");
  std::vector<double> out;
  const double decades = std::log10(ceiling / floor);
  const int count = std::max(1, static_cast<int>(std::ceil(decades * per_decade)));
  for (int k = 0; k <= count; ++k) out.push_back(floor * std::pow(ceiling / floor, static_cast<double>(k) / count));
  return out;
}

bool SolutionSet::insert(const GridProfile& p) {
  for (const auto& q : items_) {
    if (q.u.size() != p.u.size()) continue;
    const double tol = std::max(abs_, rel_ * (1.0 + std::max(q.sup_norm(), p.sup_norm())));
    if (sup_distance(q.u, p.u) <= tol) return false;
  }
  const double norm = p.sup_norm();
  auto pos = std::find_if(items_.begin(), items_.end(), [&](const GridProfile& q) { return q.sup_norm() > norm; });
  items_.insert(pos, p);
  return true;
}

std::vector<double> SolutionSet::norms() const {
  std::vector<double> out;
  for (const auto& p : items_) out.push_back(p.sup_norm());
  return out;
}

namespace {

bool accept_solution(const RadialProblem& problem, const SolveResult& r, const SearchOptions& opt) {
  return r.report.converged && r.report.sup_norm >= opt.solve.trivial_level && r.report.min_u > 0.0 &&
         r.report.max_abs_slope < 1.0 && integral_balance(problem, r.profile) <= opt.tolerances.balance_rel;
}

}  // namespace

void explore(const FixedPointOperator& op, const std::vector<double>& levels, const SearchOptions& options,
             SolutionSet& found, std::vector<Attempt>* log) {
  for (double level : levels) {
    auto res = solve(op, std::vector<double>(op.grid().size(), level), options.solve);
    const bool ok = accept_solution(op.problem(), res, options);
    if (ok) found.insert(res.profile);
    if (log) log->push_back({"level", level, op.problem().lambda, op.state().theta, res.report, false});
  }
}

CeilingResult grow_ceiling(const RadialProblem& problem, double base, const SearchOptions& options) {
  if (!(base > 0.0)) throw Error(ErrorKind::InvalidInput, "ceiling base must be positive");
  const Grid grid = Grid::for_problem(problem, options.solve.grid_cells);
  std::vector<FixedPointOperator> ops;
  std::vector<SolutionSet> sets;
  for (double th : options.theta_samples) {
    HomotopyState st;
    st.theta = th;
    ops.emplace_back(problem, grid, st);
    sets.emplace_back(options.distinct_abs, options.distinct_rel);
  }
  auto total = [&] {
    std::size_t c = 0;
    for (const auto& s : sets) c += s.size();
    return c;
  };
  auto max_norm = [&] {
    double m = 0.0;
    for (const auto& s : sets)
      for (double v : s.norms()) m = std::max(m, v);
    return m;
  };

  CeilingResult out;
  double lower = options.floor;
  double prev_ceiling = 0.0;
  std::size_t prev_count = 0;
  for (int k = 0;; ++k) {
    const double ceiling = 2.0 * base * std::pow(4.0, k);
    if (ceiling > options.hard_cap)
      throw Error(ErrorKind::UnboundedBranch, "solution norms keep growing past the hard cap");
    std::vector<double> levels;
    for (double l : geometric_levels(std::min(lower, ceiling), ceiling, options.levels_per_decade))
      if (k == 0 || l > lower) levels.push_back(l);
    for (std::size_t i = 0; i < ops.size(); ++i) explore(ops[i], levels, options, sets[i]);
    out.rounds = k + 1;
    const std::size_t count = total();
    // |u'| < 1 bounds the oscillation by R, so bands below a few R prove nothing.
    if (k > 0 && count == prev_count && max_norm() < prev_ceiling && prev_ceiling >= 4.0 * problem.radius) {
      out.ceiling = prev_ceiling;
      break;
    }
    prev_count = count;
    prev_ceiling = ceiling;
    lower = ceiling;
  }
  for (const auto& s : sets)
    for (double v : s.norms()) out.norms.push_back(v);
  std::sort(out.norms.begin(), out.norms.end());
  return out;
}

namespace {

// Largest-norm solution at factor·λ, continued down to λ.
std::optional<GridProfile> lambda_continuation(const RadialProblem& problem, const Grid& grid,
                                               const std::vector<double>& levels, const SearchOptions& options,
                                               std::vector<Attempt>& log) {
  if (options.continuation_steps < 1 || !(options.continuation_factor > 1.0)) return std::nullopt;
  RadialProblem p = problem;
  p.lambda = problem.lambda * options.continuation_factor;
  SolutionSet seeds(options.distinct_abs, options.distinct_rel);
  {
    FixedPointOperator op(p, grid, {});
    explore(op, levels, options, seeds);
  }
  if (seeds.size() == 0) return std::nullopt;
  std::vector<double> u = seeds.items().back().u;
  for (int k = 1; k <= options.continuation_steps; ++k) {
    const double s = static_cast<double>(k) / options.continuation_steps;
    p.lambda = problem.lambda * std::pow(options.continuation_factor, 1.0 - s);
    FixedPointOperator op(p, grid, {});
    auto res = solve(op, u, options.solve);
    log.push_back({"continuation", 0.0, p.lambda, 1.0, res.report, false});
    if (!accept_solution(p, res, options)) return std::nullopt;
    u = res.profile.u;
    if (k == options.continuation_steps) return res.profile;
  }
  return std::nullopt;
}

}  // namespace

PairResult find_two_solutions(const RadialProblem& problem, const ConstantsBundle& constants,
                              const SearchOptions& options) {
  problem.validate();
  PairResult out;
  const Grid grid = Grid::for_problem(problem, options.solve.grid_cells);
  const auto brackets = Brackets::from(constants);
  const double ds = constants.delta_star;
  const double ceiling = options.ceiling.value_or(constants.D_star.value_or(1e2));

  std::vector<double> levels;
  if (constants.d_star) {
    const double d = *constants.d_star;
    levels.insert(levels.end(), {1.5 * d, 0.5 * (d + ds), 0.9 * ds});
  }
  for (double l = 2 * ds; l <= ceiling; l *= 2) levels.push_back(l);
  for (double l : geometric_levels(std::min(options.floor, ceiling), ceiling, options.levels_per_decade))
    levels.push_back(l);
  levels.insert(levels.end(), options.extra_levels.begin(), options.extra_levels.end());

  SolutionSet found(options.distinct_abs, options.distinct_rel);
  FixedPointOperator op(problem, grid, {});
  explore(op, levels, options, found, &out.attempts);

  std::vector<double> large_levels;
  for (double l = 2 * ds; l <= ceiling; l *= 4) large_levels.push_back(l);
  if (large_levels.empty()) large_levels.push_back(ceiling);
  if (auto cont = lambda_continuation(problem, grid, large_levels, options, out.attempts)) found.insert(*cont);

  const auto ctx = claim_context(constants);
  for (const auto& p : found.items()) {
    auto cert = certify(problem, p, options.tolerances, ctx);
    if (!cert.overall) continue;
    out.solutions.push_back(p);
    out.certificates.push_back(std::move(cert));
  }
  for (auto& a : out.attempts) {
    if (!a.report.converged) continue;
    for (const auto& c : out.certificates)
      if (std::abs(c.sup_u - a.report.sup_norm) <= options.distinct_rel * (1.0 + c.sup_u)) a.certified = true;
  }

  if (out.solutions.size() < 2) {
    out.found = false;
    out.message = "found " + std::to_string(out.solutions.size()) + " certified nontrivial solution(s) after " +
                  std::to_string(out.attempts.size()) + " attempts";
    if (out.solutions.size() == 1) {
      out.small = out.large = out.solutions.front();
      out.small_certificate = out.large_certificate = out.certificates.front();
    }
    return out;
  }
  out.found = true;
  out.small = out.solutions.front();
  out.large = out.solutions.back();
  out.small_certificate = out.certificates.front();
  out.large_certificate = out.certificates.back();
  auto report_for = [&](const GridProfile& p) {
    FixedPointOperator fop(problem, p.grid, {});
    return solve(fop, p.u, options.solve, brackets).report;
  };
  out.small_report = report_for(out.small);
  out.large_report = report_for(out.large);

  const double ns = out.small.sup_norm(), nl = out.large.sup_norm();
  out.bracket_consistent = ns < ds && ds < nl && (!constants.d_star || *constants.d_star < ns) &&
                           (!constants.D_star || nl < *constants.D_star);
  out.message = std::to_string(out.solutions.size()) + " certified nontrivial solutions";
  if (!out.bracket_consistent) out.message += "; norms do not straddle the constant brackets";
  return out;
}

std::vector<SweepRow> lambda_sweep(const RadialProblem& problem, const std::vector<double>& lambdas,
                                   const SearchOptions& options, const std::optional<ConstantsBundle>& constants) {
  if (lambdas.empty()) throw Error(ErrorKind::InvalidInput, "lambda grid is empty");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1])) throw Error(ErrorKind::InvalidInput, "lambda grid must be strictly increasing");
  for (double l : lambdas)
    if (!(l > 0.0)) throw Error(ErrorKind::InvalidInput, "lambda values must be positive");

  const Grid grid = Grid::for_problem(problem, options.solve.grid_cells);
  const double ceiling = options.ceiling.value_or(constants && constants->D_star ? *constants->D_star : 1e2);
  std::vector<double> levels = geometric_levels(std::min(options.floor, ceiling), ceiling, options.levels_per_decade);
  levels.insert(levels.end(), options.extra_levels.begin(), options.extra_levels.end());
  std::optional<ClaimContext> ctx;
  if (constants) ctx = claim_context(*constants);

  std::vector<SweepRow> rows;
  std::vector<GridProfile> previous;
  for (double lam : lambdas) {
    RadialProblem p = problem;
    p.lambda = lam;
    FixedPointOperator op(p, grid, {});
    SolutionSet found(options.distinct_abs, options.distinct_rel);
    explore(op, levels, options, found);
    for (const auto& prev : previous) {
      auto res = solve(op, prev.u, options.solve);
      if (accept_solution(p, res, options)) found.insert(res.profile);
    }
    SweepRow row;
    row.lambda = lam;
    for (const auto& s : found.items()) {
      if (!certify(p, s, options.tolerances, ctx).overall) continue;
      row.solutions.push_back(s);
      row.norms.push_back(s.sup_norm());
    }
    row.n_solutions = static_cast<int>(row.solutions.size());
    row.message = row.n_solutions >= 2 ? "multiple" : row.n_solutions == 1 ? "single" : "trivial only";
    previous = row.solutions;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace minkrad
