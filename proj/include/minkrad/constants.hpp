#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minkrad/problem.hpp"
#include "minkrad/verify.hpp"

namespace minkrad {

/// How ε is picked on the lattice ε_j = j · ε_cap / 2^20, ε_cap = min |I⁺ᵢ| / 4.
enum class EpsilonPolicy {
  Maximal,            // largest admissible lattice point
  MinimizeLambdaStar, // admissible lattice point with the smallest λ*
};

enum class Provenance { Formula, Empirical, Fallback };

std::string to_string(Provenance p);
std::string to_string(EpsilonPolicy p);

struct IntervalDiagnostics {
  PositivityInterval interval;
  double trimmed_integral = 0.0;  // ∫_{σ+2ε}^{τ-2ε} r^{N-1} a dr
  double delta_low_term = 0.0;    // candidate for δ₋ from this interval
  double lambda_term = 0.0;       // candidate for λ* from this interval
};

struct ConstantsBundle {
  double epsilon = 0.0;
  std::optional<double> gamma;
  double delta_star = 0.0;
  double delta_low = 0.0;
  double lambda_star = 0.0;
  double min_g = 0.0;  // min g on [δ₋, δ*]
  std::optional<double> d_star;
  std::optional<double> D_star;
  Provenance d_star_provenance = Provenance::Empirical;
  Provenance D_star_provenance = Provenance::Empirical;
  EpsilonPolicy policy = EpsilonPolicy::Maximal;
  double weighted_mean = 0.0;
  std::vector<IntervalDiagnostics> intervals;
};

ClaimContext claim_context(const ConstantsBundle& bundle);

/// ∫_lo^hi r^{N-1} a dr, exact for piecewise-constant and tabulated weights.
double trimmed_integral(const RadialProblem& problem, double lo, double hi);

/// Lattice search for ε satisfying ε < |I⁺ᵢ|/4 and positive trimmed integrals.
/// Throws WeightTooThin when no lattice point qualifies.
double choose_epsilon(const SignStructure& structure, const RadialProblem& problem,
                      EpsilonPolicy policy = EpsilonPolicy::Maximal);

/// min g over [lo, hi] by 1024-point sampling plus golden-section refinement.
double min_g_on(const Nonlinearity& g, double lo, double hi);

/// δ*, γ, δ₋, λ* for a given ε. Throws InconsistentEpsilon when ε violates the constraints.
ConstantsBundle compute_bundle(const SignStructure& structure, const RadialProblem& problem, double epsilon);

struct SearchOptions;

/// Empirical d*: half the largest start level below δ* from which every solve collapses to 0,
/// capped by half the smallest nontrivial norm seen. Falls back to δ*·1e-3.
double estimate_d_star(const RadialProblem& problem, const ConstantsBundle& bundle, const SearchOptions& options,
                       Provenance* provenance = nullptr);

/// Empirical D*: ceiling growth C_k = 2·base·4^k until a band yields no new solutions
/// and every norm lies below the previous ceiling, which must be at least 4R. Throws UnboundedBranch past the hard cap.
double estimate_D_star(const RadialProblem& problem, double base_level, const SearchOptions& options);

struct ConstantsOptions {
  EpsilonPolicy policy = EpsilonPolicy::MinimizeLambdaStar;
  std::optional<double> epsilon;  // overrides the policy
  SignOptions sign;
  bool estimate_bounds = true;    // d*, D*
  int grid_cells = 2000;
};

/// Sign structure, ε, δ*, δ₋, λ* and (optionally) d*, D*.
/// Throws NoPositivityInterval / MeanConditionViolated / WeightTooThin.
ConstantsBundle compute_constants(const RadialProblem& problem, const ConstantsOptions& options = {});

}  // namespace minkrad
