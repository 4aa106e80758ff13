#include "minkrad/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "minkrad/error.hpp"
#include "minkrad/quadrature.hpp"

namespace minkrad {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool strictly_increasing(const std::vector<double>& xs) {
  return std::adjacent_find(xs.begin(), xs.end(), [](double a, double b) { return !(a < b); }) == xs.end();
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto k = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return ys[k - 1] + t * (ys[k] - ys[k - 1]);
}

std::size_t piece_index(const PiecewiseConstantWeight& w, double r, bool from_left) {
  const auto& b = w.breakpoints;
  const auto it = from_left ? std::lower_bound(b.begin(), b.end(), r) : std::upper_bound(b.begin(), b.end(), r);
  return static_cast<std::size_t>(it - b.begin());
}

void check_weight(const Weight::Spec& spec) {
  std::visit(overloaded{
                 [](const CosineShiftedWeight& w) {
                   if (!(w.exponent > 0.0)) throw Error(ErrorKind::InvalidInput, "cosine-shifted weight: exponent must be > 0");
                 },
                 [](const PiecewiseConstantWeight& w) {
                   if (w.values.size() != w.breakpoints.size() + 1)
                     throw Error(ErrorKind::InvalidInput, "piecewise-constant weight: need breakpoints.size()+1 values");
                   if (!strictly_increasing(w.breakpoints))
                     throw Error(ErrorKind::InvalidInput, "piecewise-constant weight: breakpoints must be strictly increasing");
                 },
                 [](const TableWeight& w) {
                   if (w.r.size() < 2 || w.r.size() != w.a.size())
                     throw Error(ErrorKind::InvalidInput, "table weight: need >= 2 samples of equal length");
                   if (!strictly_increasing(w.r))
                     throw Error(ErrorKind::InvalidInput, "table weight: abscissae must be strictly increasing");
                 },
             },
             spec);
}

void check_nonlinearity(const Nonlinearity::Spec& spec) {
  std::visit(overloaded{
                 [](const PowerNonlinearity& g) {
                   if (!(g.p > 0.0)) throw Error(ErrorKind::InvalidInput, "power nonlinearity: p must be > 0");
                 },
                 [](const PowerSumNonlinearity& g) {
                   if (!(g.p > 0.0) || !(g.q > 0.0))
                     throw Error(ErrorKind::InvalidInput, "power-sum nonlinearity: p, q must be > 0");
                 },
                 [](const TableNonlinearity& g) {
                   if (g.u.size() < 2 || g.u.size() != g.g.size())
                     throw Error(ErrorKind::InvalidInput, "table nonlinearity: need >= 2 samples of equal length");
                   if (g.u.front() != 0.0 || g.g.front() != 0.0)
                     throw Error(ErrorKind::InvalidInput, "table nonlinearity: first node must be (0, 0)");
                   if (!strictly_increasing(g.u))
                     throw Error(ErrorKind::InvalidInput, "table nonlinearity: u must be strictly increasing");
                   if (std::any_of(g.g.begin(), g.g.end(), [](double v) { return v < 0.0; }))
                     throw Error(ErrorKind::InvalidInput, "table nonlinearity: g must be non-negative");
                 },
                 [](const ExponentialNonlinearity&) {},
             },
             spec);
}

}  // namespace

// ---------------------------------------------------------------------------

Weight::Weight(Spec spec) : spec_(std::move(spec)) { check_weight(spec_); }

double Weight::operator()(double r) const { return right_limit(r); }

double Weight::right_limit(double r) const {
  return std::visit(overloaded{
                        [r](const CosineShiftedWeight& w) {
                          return std::cos(std::pow(std::abs(r - w.center), w.exponent) + w.phase);
                        },
                        [r](const PiecewiseConstantWeight& w) { return w.values[piece_index(w, r, false)]; },
                        [r](const TableWeight& w) { return interpolate(w.r, w.a, r); },
                    },
                    spec_);
}

double Weight::left_limit(double r) const {
  if (const auto* w = std::get_if<PiecewiseConstantWeight>(&spec_)) return w->values[piece_index(*w, r, true)];
  return right_limit(r);
}

std::vector<double> Weight::breakpoints(double lo, double hi) const {
  std::vector<double> out;
  auto keep = [&](const std::vector<double>& xs) {
    for (double x : xs)
      if (x > lo && x < hi) out.push_back(x);
  };
  if (const auto* w = std::get_if<PiecewiseConstantWeight>(&spec_)) keep(w->breakpoints);
  if (const auto* w = std::get_if<TableWeight>(&spec_)) keep(w->r);
  return out;
}

bool Weight::has_jumps() const { return std::holds_alternative<PiecewiseConstantWeight>(spec_); }

std::string Weight::kind_name() const {
  return std::visit(overloaded{
                        [](const CosineShiftedWeight&) { return std::string("cosine-shifted"); },
                        [](const PiecewiseConstantWeight&) { return std::string("piecewise-constant"); },
                        [](const TableWeight&) { return std::string("table"); },
                    },
                    spec_);
}

// ---------------------------------------------------------------------------

Nonlinearity::Nonlinearity(Spec spec) : spec_(std::move(spec)) { check_nonlinearity(spec_); }

double Nonlinearity::operator()(double u) const {
  if (u <= 0.0) return 0.0;
  return std::visit(overloaded{
                        [u](const PowerNonlinearity& g) { return std::pow(u, g.p); },
                        [u](const PowerSumNonlinearity& g) { return std::pow(u, g.p) + std::pow(u, g.q); },
                        [u](const TableNonlinearity& g) {
                          if (u >= g.u.back()) {
                            const std::size_t n = g.u.size();
                            const double slope = (g.g[n - 1] - g.g[n - 2]) / (g.u[n - 1] - g.u[n - 2]);
                            return std::max(0.0, g.g[n - 1] + slope * (u - g.u[n - 1]));
                          }
                          return interpolate(g.u, g.g, u);
                        },
                        [u](const ExponentialNonlinearity&) { return std::expm1(u) - u; },
                    },
                    spec_);
}

double Nonlinearity::derivative(double u) const {
  u = std::max(u, 0.0);
  auto power_derivative = [u](double p) {
    if (u == 0.0) return p > 1.0 ? 0.0 : (p == 1.0 ? 1.0 : std::numeric_limits<double>::infinity());
    return p * std::pow(u, p - 1.0);
  };
  return std::visit(overloaded{
                        [&](const PowerNonlinearity& g) { return power_derivative(g.p); },
                        [&](const PowerSumNonlinearity& g) { return power_derivative(g.p) + power_derivative(g.q); },
                        [u](const TableNonlinearity& g) {
                          const std::size_t n = g.u.size();
                          auto it = std::upper_bound(g.u.begin(), g.u.end(), u);
                          std::size_t k = std::min(static_cast<std::size_t>(it - g.u.begin()), n - 1);
                          k = std::max<std::size_t>(k, 1);
                          const double slope = (g.g[k] - g.g[k - 1]) / (g.u[k] - g.u[k - 1]);
                          if (u >= g.u.back() && g.g[n - 1] + slope * (u - g.u[n - 1]) <= 0.0) return 0.0;
                          return slope;
                        },
                        [u](const ExponentialNonlinearity&) { return std::expm1(u); },
                    },
                    spec_);
}

std::string Nonlinearity::kind_name() const {
  return std::visit(overloaded{
                        [](const PowerNonlinearity&) { return std::string("power"); },
                        [](const PowerSumNonlinearity&) { return std::string("power-sum"); },
                        [](const TableNonlinearity&) { return std::string("table"); },
                        [](const ExponentialNonlinearity&) { return std::string("exponential"); },
                    },
                    spec_);
}

// ---------------------------------------------------------------------------

void RadialProblem::validate() const {
  if (dimension < 1) throw Error(ErrorKind::InvalidInput, "dimension N must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorKind::InvalidInput, "radius R must be > 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidInput, "lambda must be > 0");
  if (const auto* t = std::get_if<TableWeight>(&weight.spec())) {
    if (t->r.front() > 0.0 || t->r.back() < radius)
      throw Error(ErrorKind::InvalidInput, "table weight must cover [0, R]");
  }
  if (const auto* pc = std::get_if<PiecewiseConstantWeight>(&weight.spec())) {
    for (double b : pc->breakpoints)
      if (b <= 0.0 || b >= radius)
        throw Error(ErrorKind::InvalidInput, "piecewise-constant breakpoints must lie inside (0, R)");
  }
}

RadialProblem figure1_problem() {
  RadialProblem p;
  p.dimension = 2;
  p.radius = 5.0;
  p.lambda = 0.1;
  p.weight = Weight(CosineShiftedWeight{5.0, 1.0, 1.5});
  p.nonlinearity = Nonlinearity(PowerSumNonlinearity{2.0, 3.0});
  return p;
}

double eval_weight(const RadialProblem& problem, double r) {
  if (!(r >= 0.0 && r <= problem.radius)) {
    std::ostringstream os;
    os << "weight evaluated outside [0, R]: r = " << r;
    throw Error(ErrorKind::Domain, os.str());
  }
  return problem.weight(r);
}

double weighted_integral(const Weight& weight, int dimension, double lo, double hi, int cells) {
  if (!(hi > lo)) return 0.0;
  cells = std::max(cells, 1);
  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>(cells) + 1);
  for (int k = 0; k <= cells; ++k) nodes.push_back(lo + (hi - lo) * k / cells);
  nodes.back() = hi;
  const auto extra = weight.breakpoints(lo, hi);
  nodes.insert(nodes.end(), extra.begin(), extra.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    const auto m = linear_moment(dimension, nodes[j], nodes[j + 1]);
    sum += m.left * weight.right_limit(nodes[j]) + m.right * weight.left_limit(nodes[j + 1]);
  }
  return sum;
}

double weight_sup_norm(const RadialProblem& problem, int samples) {
  double sup = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double r = problem.radius * k / samples;
    sup = std::max({sup, std::abs(problem.weight.left_limit(r)), std::abs(problem.weight.right_limit(r))});
  }
  return sup;
}

// ---------------------------------------------------------------------------

namespace {

enum class SignClass { Negative, Zero, Positive };

struct Sample {
  double r;
  double a;
  SignClass sign;
};

SignClass classify(double a, double tol) {
  if (a > tol) return SignClass::Positive;
  if (a < -tol) return SignClass::Negative;
  return SignClass::Zero;
}

// Locate where a(r) >= -tol switches on (lo: negative side, hi: non-negative side).
double bisect_sign_change(const Weight& weight, double neg_r, double nonneg_r, double tol) {
  double a = neg_r;
  double b = nonneg_r;
  for (int it = 0; it < 200 && std::abs(b - a) > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(b));
       ++it) {
    const double mid = 0.5 * (a + b);
    if (weight(mid) >= -tol)
      b = mid;
    else
      a = mid;
  }
  return 0.5 * (a + b);
}

}  // namespace

SignStructure detect_sign_structure(const RadialProblem& problem, const SignOptions& options) {
  problem.validate();
  if (options.grid_points < 16) throw Error(ErrorKind::InvalidInput, "grid_points must be >= 16");
  const double R = problem.radius;
  const Weight& weight = problem.weight;

  std::vector<double> nodes;
  const int n = options.grid_points;
  for (int k = 0; k < n; ++k) nodes.push_back(R * k / (n - 1));
  nodes.back() = R;
  const auto extra = weight.breakpoints(0.0, R);
  nodes.insert(nodes.end(), extra.begin(), extra.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  // A jump contributes two samples at the same abscissa.
  std::vector<Sample> samples;
  for (double r : nodes) {
    const double left = weight.left_limit(r);
    const double right = weight.right_limit(r);
    if (r > 0.0 && left != right) samples.push_back({r, left, classify(left, options.sign_tol)});
    samples.push_back({r, right, classify(right, options.sign_tol)});
  }

  SignStructure out;
  std::size_t k = 0;
  while (k < samples.size()) {
    if (samples[k].sign == SignClass::Negative) {
      ++k;
      continue;
    }
    std::size_t end = k;
    bool has_positive = false;
    while (end < samples.size() && samples[end].sign != SignClass::Negative) {
      has_positive = has_positive || samples[end].sign == SignClass::Positive;
      ++end;
    }
    if (has_positive) {
      PositivityInterval iv;
      if (k == 0)
        iv.sigma = 0.0;
      else if (samples[k - 1].r == samples[k].r)
        iv.sigma = samples[k].r;
      else
        iv.sigma = bisect_sign_change(weight, samples[k - 1].r, samples[k].r, options.sign_tol);
      if (end == samples.size())
        iv.tau = R;
      else if (samples[end].r == samples[end - 1].r)
        iv.tau = samples[end].r;
      else
        iv.tau = bisect_sign_change(weight, samples[end].r, samples[end - 1].r, options.sign_tol);
      if (iv.tau > iv.sigma) out.intervals.push_back(iv);
    }
    k = end;
  }

  if (out.intervals.empty()) throw Error(ErrorKind::NoPositivityInterval, "no positivity interval: a(r) <= 0 on [0, R]");

  out.weighted_mean = weighted_integral(weight, problem.dimension, 0.0, R, options.grid_points);
  if (options.strict_mean && !(out.weighted_mean < 0.0)) {
    std::ostringstream os;
    os << "(a_#) violated: integral of r^{N-1} a(r) over [0, R] is " << out.weighted_mean << " >= 0";
    throw Error(ErrorKind::MeanConditionViolated, os.str());
  }
  return out;
}

bool check_mean_condition(const SignStructure& structure) { return structure.weighted_mean < 0.0; }

HypothesisReport check_hypotheses(const RadialProblem& problem, const SignOptions& options) {
  HypothesisReport rep;
  const Nonlinearity& g = problem.nonlinearity;

  if (g(0.0) != 0.0) {
    rep.g_positive = false;
    rep.notes.emplace_back("g(0) != 0");
  }
  for (int k = 1; k <= 400; ++k) {
    const double u = std::pow(10.0, -8.0 + 14.0 * k / 400.0);
    if (!(g(u) > 0.0)) {
      rep.g_positive = false;
      rep.notes.emplace_back("g(u) <= 0 at u = " + std::to_string(u));
      break;
    }
  }

  // g(u)/u -> 0: the ratio must keep shrinking as u decreases.
  const double q_small = g(1e-12) / 1e-12;
  const double q_mid = g(1e-4) / 1e-4;
  if (!(q_small <= 0.5 * q_mid || q_small < 1e-10)) {
    rep.g_superlinear_zero = false;
    rep.notes.emplace_back("g(u)/u does not vanish as u -> 0+");
  }

  // Regular oscillation: g(ωu)/g(u) -> 1 as ω -> 1.
  auto ratio_defect = [&](double u) {
    const double gu = g(u);
    if (!(gu > 0.0) || !std::isfinite(gu)) return std::numeric_limits<double>::infinity();
    const double gw = g(u * (1.0 + 1e-3));
    return std::abs(gw / gu - 1.0);
  };
  if (!(std::max(ratio_defect(1e-6), ratio_defect(1e-8)) <= 0.05)) {
    rep.g_regular_zero = false;
    rep.notes.emplace_back("g(omega u)/g(u) does not tend to 1 as u -> 0+");
  }
  if (!(std::max(ratio_defect(1e3), ratio_defect(1e6)) <= 0.05)) {
    rep.g_regular_infinity = false;
    rep.notes.emplace_back("g(omega u)/g(u) does not tend to 1 as u -> infinity (growth too fast)");
  }

  try {
    const auto s = detect_sign_structure(problem, options);
    rep.mean_negative = check_mean_condition(s);
    if (!rep.mean_negative) rep.notes.emplace_back("(a_#) violated: weighted mean of a is not negative");
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoPositivityInterval) throw;
    rep.weight_has_positive_part = false;
    rep.mean_negative = weighted_integral(problem.weight, problem.dimension, 0.0, problem.radius, options.grid_points) < 0.0;
    rep.notes.emplace_back(e.what());
  }
  return rep;
}

}  // namespace minkrad
