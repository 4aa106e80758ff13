#include "minkrad/shooting.hpp"

#include <algorithm>
#include <array>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "minkrad/curvature.hpp"
#include "minkrad/error.hpp"

namespace minkrad {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;  // (u, v)

struct CellSystem {
  const RadialProblem* problem;
  int N;
  double ra, rb;
  double a_left, a_right;  // one-sided limits at the cell ends

  double weight(double r) const {
    if (r <= ra) return a_left;
    if (r >= rb) return a_right;
    return problem->weight(r);
  }
  void operator()(const State& x, State& dxdt, double r) const {
    const double rp = N == 1 ? 1.0 : std::pow(r, N - 1);
    dxdt[0] = phi_inv(x[1] / rp);
    dxdt[1] = -rp * extend_f_value(problem->lambda, weight(r), problem->nonlinearity, x[0]);
  }
};

// Leading-order start near the origin: w(r) ≈ f0 r / N.
void series(double c, double f0, int N, double r, double& u, double& v, double& du) {
  const double k = f0 / N;
  const double kr = k * r;
  // c - (sqrt(1 + k²r²) - 1)/k, written without cancellation
  u = c - k * r * r / (std::sqrt(1.0 + kr * kr) + 1.0);
  v = -f0 * std::pow(r, N) / N;
  du = phi_inv(-kr);
}

}  // namespace

ShotResult integrate_shot(const RadialProblem& problem, double c, const StepControls& ctl) {
  problem.validate();
  if (!(c >= 0.0)) throw Error(ErrorKind::Domain, "shooting level must be >= 0");
  const int N = problem.dimension;
  const double R = problem.radius;
  const Grid out_grid = ctl.output_grid ? *ctl.output_grid : Grid::for_problem(problem, ctl.output_cells);
  if (std::abs(out_grid.radius() - R) > 1e-12 * R) throw Error(ErrorKind::InvalidInput, "output grid does not span [0, R]");

  std::vector<double> stops(out_grid.nodes().begin(), out_grid.nodes().end());
  for (double b : problem.weight.breakpoints(0.0, R)) stops.push_back(b);

  double r_start = 0.0;
  if (N >= 2) {
    r_start = ctl.r_switch_rel * R;
    const auto bps = problem.weight.breakpoints(0.0, R);
    if (!bps.empty()) r_start = std::min(r_start, 0.5 * bps.front());
    stops.push_back(r_start);
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  ShotResult res;
  res.c = c;
  const std::size_t n = out_grid.size();
  std::vector<double> u(n, 0.0), du(n, 0.0);

  const double f0 = extend_f_value(problem.lambda, problem.weight.right_limit(0.0), problem.nonlinearity, c);
  State x{c, 0.0};
  std::size_t out_i = 0;
  auto record = [&](double r, double uu, double dd) {
    while (out_i < n && out_grid[out_i] <= r) {
      if (out_grid[out_i] == r) {
        u[out_i] = uu;
        du[out_i] = dd;
      }
      ++out_i;
    }
  };
  record(0.0, c, 0.0);

  std::size_t s = 1;
  if (N >= 2) {
    for (; s < stops.size() && stops[s] <= r_start; ++s) {
      double uu, vv, dd;
      series(c, f0, N, stops[s], uu, vv, dd);
      record(stops[s], uu, dd);
      x = {uu, vv};
    }
  }

  auto stepper = odeint::make_controlled(ctl.atol, ctl.rtol, odeint::runge_kutta_dopri5<State>());
  double dt = std::min(1e-3 * R, stops.size() > s ? stops[s] - stops[s - 1] : R);
  for (; s < stops.size(); ++s) {
    const double ra = stops[s - 1], rb = stops[s];
    CellSystem sys{&problem, N, ra, rb, problem.weight.right_limit(ra), problem.weight.left_limit(rb)};
    stepper.reset();
    double r = ra;
    while (r < rb) {
      if (++res.steps > ctl.max_steps) throw Error(ErrorKind::InvalidInput, "shot exceeded the step budget");
      const bool last = dt >= rb - r;
      double h = last ? rb - r : dt;
      const double r_before = r;
      if (stepper.try_step(sys, x, r, h) == odeint::success) {
        if (last) r = rb;  // land exactly on the stop
        const double rp = N == 1 ? 1.0 : std::pow(r, N - 1);
        const double slope = phi_inv(x[1] / rp);
        if (std::abs(slope) >= 1.0 - ctl.slope_guard) {
          res.valid = false;
          res.saturation_radius = r;
          break;
        }
        if (!last || h > dt) dt = h;
      } else {
        dt = h;
        if (r != r_before || dt < 1e-14 * R) throw Error(ErrorKind::InvalidInput, "shot step size underflow");
      }
    }
    if (!res.valid) break;
    const double rp = N == 1 ? 1.0 : std::pow(rb, N - 1);
    record(rb, x[0], phi_inv(x[1] / rp));
  }

  res.flux_R = x[1];
  res.defect = res.valid ? phi_inv(x[1] / (N == 1 ? 1.0 : std::pow(R, N - 1))) : std::nan("");
  res.profile = GridProfile(out_grid, std::move(u), std::move(du));
  return res;
}

std::vector<ShotResult> find_roots(const RadialProblem& problem, double c_lo, double c_hi, const RootOptions& opt) {
  if (!(c_lo > 0.0) || !(c_hi > c_lo)) throw Error(ErrorKind::InvalidInput, "need 0 < c_lo < c_hi");
  if (opt.samples < 8) throw Error(ErrorKind::InvalidInput, "samples must be >= 8");
  StepControls ctl = opt.controls;
  if (!ctl.output_grid) ctl.output_grid = Grid::for_problem(problem, ctl.output_cells);

  std::vector<double> cs(opt.samples);
  for (int k = 0; k < opt.samples; ++k) {
    const double t = static_cast<double>(k) / (opt.samples - 1);
    cs[k] = opt.geometric ? c_lo * std::pow(c_hi / c_lo, t) : c_lo + t * (c_hi - c_lo);
  }
  std::vector<ShotResult> shots;
  shots.reserve(cs.size());
  for (double c : cs) shots.push_back(integrate_shot(problem, c, ctl));

  std::vector<ShotResult> roots;
  for (std::size_t k = 0; k + 1 < shots.size(); ++k) {
    const auto& a = shots[k];
    const auto& b = shots[k + 1];
    if (!a.valid || !b.valid) continue;
    if (a.defect == 0.0) {
      auto full = integrate_shot(problem, a.c, ctl);
      if (std::abs(full.defect) <= opt.defect_tol) roots.push_back(std::move(full));
      continue;
    }
    if ((a.defect > 0.0) == (b.defect > 0.0)) continue;
    bool broken = false;
    auto defect = [&](double c) {
      auto sh = integrate_shot(problem, c, ctl);
      if (!sh.valid) broken = true;
      return sh.valid ? sh.defect : 0.0;
    };
    boost::uintmax_t iters = 200;
    try {
      const auto bracket = boost::math::tools::toms748_solve(defect, a.c, b.c, a.defect, b.defect,
                                                             boost::math::tools::eps_tolerance<double>(52), iters);
      if (broken) continue;
      auto lo = integrate_shot(problem, bracket.first, ctl);
      auto hi = integrate_shot(problem, bracket.second, ctl);
      auto& best = std::abs(lo.defect) <= std::abs(hi.defect) ? lo : hi;
      if (best.valid && std::abs(best.defect) <= opt.defect_tol) roots.push_back(std::move(best));
    } catch (const boost::math::evaluation_error&) {
      continue;
    }
  }
  return roots;
}

OracleMatch match_oracle(const RadialProblem& problem, const GridProfile& profile, double window,
                         const RootOptions& options) {
  if (!(window > 0.0 && window < 1.0)) throw Error(ErrorKind::InvalidInput, "window must lie in (0, 1)");
  const double c0 = profile.u.at(0);
  OracleMatch out;
  if (!(c0 > 0.0)) return out;
  RootOptions opt = options;
  opt.samples = std::max(opt.samples, 16);
  opt.geometric = false;
  opt.controls.output_grid = profile.grid;
  auto roots = find_roots(problem, c0 * (1.0 - window), c0 * (1.0 + window), opt);
  if (roots.empty()) return out;
  auto best = std::min_element(roots.begin(), roots.end(),
                               [&](const auto& a, const auto& b) { return std::abs(a.c - c0) < std::abs(b.c - c0); });
  out.found = true;
  out.root = std::move(*best);
  for (std::size_t i = 0; i < profile.u.size(); ++i)
    out.sup_distance = std::max(out.sup_distance, std::abs(profile.u[i] - out.root.profile.u[i]));
  return out;
}

}  // namespace minkrad
