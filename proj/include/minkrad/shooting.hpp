#pragma once

#include <optional>
#include <vector>

#include "minkrad/grid.hpp"
#include "minkrad/problem.hpp"

namespace minkrad {

/// v = r^{N-1} φ(u'); u' = φ⁻¹(v / r^{N-1}), v' = -r^{N-1} f(r, u).
struct PlanarState {
  double r = 0.0;
  double u = 0.0;
  double v = 0.0;
};

struct StepControls {
  double rtol = 1e-12;
  double atol = 1e-14;
  /// Series start on [0, r_switch], r_switch = r_switch_rel · R (N >= 2 only).
  double r_switch_rel = 1e-6;
  /// A shot is invalid once |u'| >= 1 - slope_guard.
  double slope_guard = 1e-9;
  long max_steps = 2'000'000;
  /// Output nodes; Grid::for_problem(problem, output_cells) when absent.
  std::optional<Grid> output_grid;
  int output_cells = 2000;
};

struct ShotResult {
  double c = 0.0;
  double defect = 0.0;  // u'(R)
  double flux_R = 0.0;  // v(R)
  GridProfile profile;
  bool valid = true;
  double saturation_radius = -1.0;  // where the slope guard fired, -1 otherwise
  long steps = 0;
};

/// Integrates from (u, v)(0) = (c, 0), stepping node to node so that weight
/// breakpoints are never crossed inside a step.
ShotResult integrate_shot(const RadialProblem& problem, double c, const StepControls& controls = {});

struct RootOptions {
  int samples = 64;
  bool geometric = true;
  double defect_tol = 1e-10;
  StepControls controls;
};

/// Scans u'(R) over c in [c_lo, c_hi], brackets sign changes between valid
/// shots and refines each; returns the roots with |defect| <= defect_tol, ascending c.
std::vector<ShotResult> find_roots(const RadialProblem& problem, double c_lo, double c_hi,
                                   const RootOptions& options = {});

struct OracleMatch {
  bool found = false;
  ShotResult root;
  double sup_distance = 0.0;  // max |u - u_oracle| over the profile's nodes
};

/// Root of the shooting defect nearest to profile.u[0], searched in
/// u(0)·[1 - window, 1 + window] and sampled on the profile's own grid.
OracleMatch match_oracle(const RadialProblem& problem, const GridProfile& profile, double window = 0.05,
                         const RootOptions& options = {});

}  // namespace minkrad
