#include "minkrad/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "minkrad/error.hpp"

namespace minkrad::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::Io, std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw Error(ErrorKind::Io, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) { return j.contains(key) ? number(j, key) : fallback; }

std::vector<double> numbers(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) throw Error(ErrorKind::Io, std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw Error(ErrorKind::Io, std::string("field '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::string kind(const json& j) {
  const json& k = field(j, "kind");
  if (!k.is_string()) throw Error(ErrorKind::Io, "'kind' must be a string");
  return k.get<std::string>();
}

Weight weight_from_json(const json& j) {
  const std::string k = kind(j);
  if (k == "cosine-shifted")
    return Weight(CosineShiftedWeight{number_or(j, "center", 5.0), number_or(j, "phase", 1.0), number_or(j, "exponent", 1.5)});
  if (k == "piecewise-constant") return Weight(PiecewiseConstantWeight{numbers(j, "breakpoints"), numbers(j, "values")});
  if (k == "table") return Weight(TableWeight{numbers(j, "r"), numbers(j, "a")});
  throw Error(ErrorKind::Io, "unknown weight kind '" + k + "'");
}

Nonlinearity nonlinearity_from_json(const json& j) {
  const std::string k = kind(j);
  if (k == "power") return Nonlinearity(PowerNonlinearity{number(j, "p")});
  if (k == "power-sum") return Nonlinearity(PowerSumNonlinearity{number(j, "p"), number(j, "q")});
  if (k == "table") return Nonlinearity(TableNonlinearity{numbers(j, "u"), numbers(j, "g")});
  if (k == "exponential") return Nonlinearity(ExponentialNonlinearity{});
  throw Error(ErrorKind::Io, "unknown nonlinearity kind '" + k + "'");
}

json claim_to_json(const ClaimCheck& c) {
  return {{"name", c.name},          {"applicable", c.applicable},     {"points", c.points},
          {"violations", c.violations}, {"worst_margin", c.worst_margin}, {"passed", c.passed()}};
}

}  // namespace

RadialProblem problem_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Io, "problem file must hold a JSON object");
  RadialProblem p;
  const json& n = field(j, "N");
  if (!n.is_number_integer()) throw Error(ErrorKind::Io, "field 'N' must be an integer");
  p.dimension = n.get<int>();
  p.radius = number(j, "R");
  p.lambda = number(j, "lambda");
  try {
    p.weight = weight_from_json(field(j, "weight"));
    p.nonlinearity = nonlinearity_from_json(field(j, "nonlinearity"));
    p.validate();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(ErrorKind::Io, std::string("invalid problem: ") + e.what());
  }
  return p;
}

json problem_to_json(const RadialProblem& p) {
  json j;
  j["N"] = p.dimension;
  j["R"] = p.radius;
  j["lambda"] = p.lambda;
  j["weight"] = std::visit(
      overloaded{
          [](const CosineShiftedWeight& w) -> json {
            return {{"kind", "cosine-shifted"}, {"center", w.center}, {"phase", w.phase}, {"exponent", w.exponent}};
          },
          [](const PiecewiseConstantWeight& w) -> json {
            return {{"kind", "piecewise-constant"}, {"breakpoints", w.breakpoints}, {"values", w.values}};
          },
          [](const TableWeight& w) -> json { return {{"kind", "table"}, {"r", w.r}, {"a", w.a}}; },
      },
      p.weight.spec());
  j["nonlinearity"] = std::visit(
      overloaded{
          [](const PowerNonlinearity& g) -> json { return {{"kind", "power"}, {"p", g.p}}; },
          [](const PowerSumNonlinearity& g) -> json { return {{"kind", "power-sum"}, {"p", g.p}, {"q", g.q}}; },
          [](const TableNonlinearity& g) -> json { return {{"kind", "table"}, {"u", g.u}, {"g", g.g}}; },
          [](const ExponentialNonlinearity&) -> json { return {{"kind", "exponential"}}; },
      },
      p.nonlinearity.spec());
  return j;
}

RadialProblem load_problem(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Io, path.string() + ": " + e.what());
  }
  return problem_from_json(j);
}

json to_json(const ConstantsBundle& b) {
  json j;
  j["epsilon"] = b.epsilon;
  j["epsilon_policy"] = to_string(b.policy);
  j["gamma"] = b.gamma ? json(*b.gamma) : json(nullptr);
  j["delta_star"] = b.delta_star;
  j["delta_low"] = b.delta_low;
  j["lambda_star"] = b.lambda_star;
  j["min_g"] = b.min_g;
  j["weighted_mean"] = b.weighted_mean;
  j["d_star"] = b.d_star ? json(*b.d_star) : json(nullptr);
  j["D_star"] = b.D_star ? json(*b.D_star) : json(nullptr);
  j["provenance"] = {{"epsilon", "formula"},
                     {"gamma", "formula"},
                     {"delta_star", "formula"},
                     {"delta_low", "formula"},
                     {"lambda_star", "formula"},
                     {"d_star", b.d_star ? to_string(b.d_star_provenance) : "absent"},
                     {"D_star", b.D_star ? to_string(b.D_star_provenance) : "absent"}};
  json iv = json::array();
  for (const auto& d : b.intervals)
    iv.push_back({{"sigma", d.interval.sigma},
                  {"tau", d.interval.tau},
                  {"trimmed_integral", d.trimmed_integral},
                  {"delta_low_term", d.delta_low_term},
                  {"lambda_term", d.lambda_term}});
  j["intervals"] = iv;
  return j;
}

json to_json(const Certificate& c) {
  json claims = json::array();
  for (const auto& cl : c.claims) claims.push_back(claim_to_json(cl));
  return {{"overall", c.overall},
          {"failures", c.failures},
          {"scale", c.scale},
          {"ode_residual_sup", c.ode_residual_sup},
          {"ode_tolerance", c.ode_tolerance},
          {"profile_consistency", c.profile_consistency},
          {"profile_tolerance", c.profile_tolerance},
          {"neumann_defect_0", c.neumann_defect_0},
          {"neumann_defect_R", c.neumann_defect_R},
          {"boundary_tolerance", c.boundary_tolerance},
          {"integral_identity", c.integral_identity},
          {"integral_tolerance", c.integral_tolerance},
          {"balance_ratio", c.balance_ratio},
          {"balance_tolerance", c.balance_tolerance},
          {"min_u", c.min_u},
          {"sup_u", c.sup_u},
          {"max_abs_slope", c.max_abs_slope},
          {"slope_limit", c.slope_limit},
          {"trivial", c.trivial},
          {"flux_monotone", c.flux_monotone},
          {"flux_worst_violation", c.flux_worst_violation},
          {"claims", claims}};
}

json to_json(const SolveReport& r) {
  return {{"converged", r.converged},
          {"oscillation", r.oscillation},
          {"iterations", r.iterations},
          {"final_residual", r.final_residual},
          {"sup_norm", r.sup_norm},
          {"min_u", r.min_u},
          {"max_abs_slope", r.max_abs_slope},
          {"classification", to_string(r.classification)},
          {"message", r.message}};
}

json to_json(const SignStructure& s) {
  json iv = json::array();
  for (const auto& i : s.intervals) iv.push_back({i.sigma, i.tau});
  return {{"intervals", iv}, {"weighted_mean", s.weighted_mean}};
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string profile_csv(const GridProfile& p) {
  std::string out = "r,u,du\n";
  for (std::size_t i = 0; i < p.grid.size(); ++i)
    out += format_double(p.grid[i]) + "," + format_double(p.u[i]) + "," + format_double(p.du[i]) + "\n";
  return out;
}

void write_profile_csv(const std::filesystem::path& path, const GridProfile& p) { write_text(path, profile_csv(p)); }

GridProfile read_profile_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("r,u", 0) != 0)
    throw Error(ErrorKind::Io, path.string() + ": expected header 'r,u,du'");
  const bool has_du = line.find("du") != std::string::npos;
  std::vector<double> r, u, du;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw Error(ErrorKind::Io, path.string() + ":" + std::to_string(lineno) + ": not a number");
      }
    }
    if (vals.size() != (has_du ? 3u : 2u))
      throw Error(ErrorKind::Io, path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    r.push_back(vals[0]);
    u.push_back(vals[1]);
    du.push_back(has_du ? vals[2] : 0.0);
  }
  try {
    return GridProfile(Grid(std::move(r)), std::move(u), std::move(du));
  } catch (const Error& e) {
    throw Error(ErrorKind::Io, path.string() + ": " + e.what());
  }
}

std::string weight_csv(const RadialProblem& problem, int cells) {
  std::vector<std::pair<double, double>> rows;
  const double R = problem.radius;
  const auto bps = problem.weight.breakpoints(0.0, R);
  for (int k = 0; k <= cells; ++k) {
    const double r = R * k / cells;
    rows.emplace_back(r, problem.weight(r));
  }
  for (double b : bps) {
    rows.emplace_back(b, problem.weight.left_limit(b));
    rows.emplace_back(b, problem.weight.right_limit(b));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out = "r,a\n";
  for (const auto& [r, a] : rows) out += format_double(r) + "," + format_double(a) + "\n";
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.norms.size());
  std::string out = "lambda,n_solutions";
  for (std::size_t k = 1; k <= width; ++k) out += ",norm_" + std::to_string(k);
  out += "\n";
  for (const auto& r : rows) {
    out += format_double(r.lambda) + "," + std::to_string(r.n_solutions);
    for (std::size_t k = 0; k < width; ++k) out += "," + (k < r.norms.size() ? format_double(r.norms[k]) : std::string());
    out += "\n";
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace minkrad::io
