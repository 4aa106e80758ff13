#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minkrad/constants.hpp"
#include "minkrad/grid.hpp"
#include "minkrad/operator.hpp"
#include "minkrad/problem.hpp"
#include "minkrad/verify.hpp"

namespace minkrad {

enum class SolveMethod {
  Newton,          // exact Jacobian of the discrete operator, bordered forward solve, line search
  AndersonPicard,  // damped Picard with Anderson mixing
};

struct SolveOptions {
  double tol = 1e-10;  // sup-norm of u - T u
  int max_iter = 100;
  double damping = 1.0;
  int acceleration_depth = 5;
  int grid_cells = 2000;
  std::optional<GridProfile> start_profile;  // takes precedence over start_level; fixes the grid
  double start_level = 0.0;
  double trivial_level = 1e-6;
  /// Newton stops only once the last step is below step_factor · tol · (1 + ‖u‖∞) as well.
  double step_factor = 1e3;
  SolveMethod method = SolveMethod::Newton;

  void validate() const;
};

enum class Classification { Trivial, Small, MiddleExcluded, Large, Unclassified };

std::string to_string(Classification c);
std::string to_string(SolveMethod m);

/// Norm brackets used to label converged solutions.
struct Brackets {
  double d_star = 0.0;
  double delta_star = 0.0;
  std::optional<double> D_star;
  double gap = 0.0;  // half-width of the excluded band around δ*

  static Brackets from(const ConstantsBundle& bundle);
};

Classification classify(double sup_norm, double trivial_level, const std::optional<Brackets>& brackets);

struct SolveReport {
  bool converged = false;
  bool oscillation = false;  // line search / mixing stalled; profile is the best iterate
  int iterations = 0;
  double final_residual = 0.0;
  double sup_norm = 0.0;
  double min_u = 0.0;
  double max_abs_slope = 0.0;
  Classification classification = Classification::Unclassified;
  std::string message;
};

struct SolveResult {
  GridProfile profile;  // u with du = (T u)'
  SolveReport report;
};

SolveResult solve(const RadialProblem& problem, const HomotopyState& state, const SolveOptions& options,
                  const std::optional<Brackets>& brackets = std::nullopt);

/// Same, reusing a prepared operator; `start` must live on its grid.
SolveResult solve(const FixedPointOperator& op, std::vector<double> start, const SolveOptions& options,
                  const std::optional<Brackets>& brackets = std::nullopt);

struct HomotopyStep {
  HomotopyState state;
  GridProfile profile;
  SolveReport report;
};

/// Linear path in (θ, α) with `steps` segments, warm-started. Stops at the first
/// divergence; throws InvalidInput if the solve at from_state already diverges.
std::vector<HomotopyStep> homotopy_path(const RadialProblem& problem, const HomotopyState& from,
                                        const HomotopyState& to, int steps, const SolveOptions& options);

// ---------------------------------------------------------------------------
// Multi-start search
// ---------------------------------------------------------------------------

struct SearchOptions {
  SolveOptions solve;
  Tolerances tolerances;
  int levels_per_decade = 8;
  double floor = 1e-6;                 // smallest start level of the geometric ladder
  std::optional<double> ceiling;       // largest start level; D* or 1e2 when absent
  std::vector<double> extra_levels;
  double continuation_factor = 2.0;    // λ continuation starts at factor·λ
  int continuation_steps = 8;
  std::vector<double> theta_samples = {1.0 / 3.0, 2.0 / 3.0, 1.0};
  double hard_cap = 1e6;
  /// Two profiles are the same solution when their sup distance is below
  /// max(distinct_abs, distinct_rel · (1 + ‖u‖∞)).
  double distinct_abs = 1e-9;
  double distinct_rel = 1e-6;
};

/// Geometric ladder floor..ceiling with `per_decade` points per decade, endpoints included.
std::vector<double> geometric_levels(double floor, double ceiling, int per_decade);

/// Distinct solutions kept in ascending sup-norm order.
class SolutionSet {
 public:
  explicit SolutionSet(double abs_tol = 1e-9, double rel_tol = 1e-6) : abs_(abs_tol), rel_(rel_tol) {}
  /// Returns true when the profile is new.
  bool insert(const GridProfile& p);
  const std::vector<GridProfile>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  std::vector<double> norms() const;

 private:
  double abs_, rel_;
  std::vector<GridProfile> items_;
};

struct Attempt {
  std::string source;  // "level", "continuation", "warm"
  double start_level = 0.0;
  double lambda = 0.0;
  double theta = 1.0;
  SolveReport report;
  bool certified = false;
};

/// Solve from each constant level; converged nontrivial nonnegative solutions go
/// into `found`. Every attempt is appended to `log` when given.
void explore(const FixedPointOperator& op, const std::vector<double>& levels, const SearchOptions& options,
             SolutionSet& found, std::vector<Attempt>* log = nullptr);

struct CeilingResult {
  double ceiling = 0.0;
  int rounds = 0;
  std::vector<double> norms;  // distinct nontrivial norms over all θ samples
};

/// Ceiling growth C_k = 2·base·4^k; see estimate_D_star.
CeilingResult grow_ceiling(const RadialProblem& problem, double base_level, const SearchOptions& options);

struct PairResult {
  bool found = false;
  GridProfile small, large;
  SolveReport small_report, large_report;
  Certificate small_certificate, large_certificate;
  std::vector<GridProfile> solutions;  // every certified distinct nontrivial solution, ascending norm
  std::vector<Certificate> certificates;
  std::vector<Attempt> attempts;
  /// d* < ‖u_s‖ < δ* < ‖u_ℓ‖ < D* for the available constants.
  bool bracket_consistent = false;
  std::string message;
};

PairResult find_two_solutions(const RadialProblem& problem, const ConstantsBundle& constants,
                              const SearchOptions& options);

struct SweepRow {
  double lambda = 0.0;
  int n_solutions = 0;  // distinct certified nontrivial
  std::vector<double> norms;
  std::vector<GridProfile> solutions;
  std::string message;
};

/// Throws InvalidInput unless the grid is nonempty and strictly increasing.
std::vector<SweepRow> lambda_sweep(const RadialProblem& problem, const std::vector<double>& lambdas,
                                   const SearchOptions& options, const std::optional<ConstantsBundle>& constants = std::nullopt);

}  // namespace minkrad
