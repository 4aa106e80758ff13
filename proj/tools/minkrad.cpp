#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minkrad/minkrad.hpp"

namespace fs = std::filesystem;
using namespace minkrad;
using io::json;

namespace {

enum Exit : int { kOk = 0, kVerifyFailed = 1, kHypothesis = 2, kNoMultiplicity = 3, kIo = 4 };

struct RunConfig {
  std::string problem_path;
  std::string out_dir;
  std::string profile_path;
  std::optional<int> grid;
  std::optional<double> tol;
  std::string lambda_grid;
  long seed = 0;
};

// Files are collected first and written once everything has been computed.
class Outputs {
 public:
  void add(const std::string& name, std::string text) { files_[name] = std::move(text); }
  void flush(const std::string& dir) const {
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir + ": " + ec.message());
    for (const auto& [name, text] : files_) io::write_text(fs::path(dir) / name, text);
  }

 private:
  std::map<std::string, std::string> files_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> parse_lambda_grid(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = spec.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos)
    throw Error(ErrorKind::InvalidInput, "--lambda-grid expects a:b:n");
  double lo, hi;
  long n;
  try {
    lo = std::stod(spec.substr(0, a));
    hi = std::stod(spec.substr(a + 1, b - a - 1));
    n = std::stol(spec.substr(b + 1));
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "--lambda-grid: cannot parse '" + spec + "'");
  }
  if (n < 1) throw Error(ErrorKind::InvalidInput, "--lambda-grid: empty grid");
  if (n > 1 && !(hi > lo)) throw Error(ErrorKind::InvalidInput, "--lambda-grid: need a < b");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) out[k] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (n - 1);
  return out;
}

RadialProblem load(const RunConfig& cfg) {
  if (cfg.problem_path.empty()) throw Error(ErrorKind::Io, "--problem is required");
  return io::load_problem(cfg.problem_path);
}

SearchOptions search_options(const RunConfig& cfg) {
  SearchOptions so;
  if (cfg.grid) so.solve.grid_cells = *cfg.grid;
  if (cfg.tol) so.solve.tol = *cfg.tol;
  so.solve.validate();
  return so;
}

ConstantsOptions constants_options(const RunConfig& cfg) {
  ConstantsOptions co;
  if (cfg.grid) co.grid_cells = *cfg.grid;
  return co;
}

json solution_json(const GridProfile& p, const Certificate& c, const OracleMatch& m) {
  json j;
  j["sup_norm"] = p.sup_norm();
  j["u0"] = p.u.front();
  j["min_u"] = p.min_value();
  j["max_abs_slope"] = p.max_abs_slope();
  j["certified"] = c.overall;
  j["oracle_found"] = m.found;
  if (m.found) {
    j["oracle_c"] = m.root.c;
    j["oracle_sup_distance"] = m.sup_distance;
    j["oracle_match"] = m.sup_distance <= 1e-4 * p.sup_norm();
  }
  return j;
}

void print_solution(const char* tag, const GridProfile& p, const Certificate& c, const OracleMatch& m) {
  std::printf("%-6s ‖u‖∞=%.10g u(0)=%.10g min=%.6g max|u'|=%.6f certified=%s oracle=%s\n", tag, p.sup_norm(),
              p.u.front(), p.min_value(), p.max_abs_slope(), c.overall ? "yes" : "no",
              m.found ? io::format_double(m.sup_distance).c_str() : "none");
}

struct PairOutcome {
  json summary;
  bool certified = false;
};

// Constants, the extremal pair, certificates and oracle checks for one problem.
PairOutcome solve_pair(const RadialProblem& problem, const RunConfig& cfg, Outputs& out) {
  const ConstantsBundle bundle = compute_constants(problem, constants_options(cfg));
  out.add("constants.json", dump(io::to_json(bundle)));
  const PairResult pr = find_two_solutions(problem, bundle, search_options(cfg));
  PairOutcome res;
  res.summary["constants"] = io::to_json(bundle);
  res.summary["message"] = pr.message;
  res.summary["n_certified"] = pr.solutions.size();
  res.summary["bracket_consistent"] = pr.bracket_consistent;
  res.summary["seed"] = cfg.seed;
  json norms = json::array();
  for (const auto& s : pr.solutions) norms.push_back(s.sup_norm());
  res.summary["norms"] = norms;
  std::printf("%s\n", pr.message.c_str());
  if (!pr.found) return res;

  const OracleMatch ms = match_oracle(problem, pr.small);
  const OracleMatch ml = match_oracle(problem, pr.large);
  out.add("u_small.csv", io::profile_csv(pr.small));
  out.add("u_large.csv", io::profile_csv(pr.large));
  out.add("certificate_small.json", dump(io::to_json(pr.small_certificate)));
  out.add("certificate_large.json", dump(io::to_json(pr.large_certificate)));
  res.summary["small"] = solution_json(pr.small, pr.small_certificate, ms);
  res.summary["large"] = solution_json(pr.large, pr.large_certificate, ml);
  print_solution("small", pr.small, pr.small_certificate, ms);
  print_solution("large", pr.large, pr.large_certificate, ml);
  res.certified = pr.small_certificate.overall && pr.large_certificate.overall;
  return res;
}

int cmd_constants(const RunConfig& cfg) {
  const RadialProblem problem = load(cfg);
  const ConstantsBundle bundle = compute_constants(problem, constants_options(cfg));
  const std::string text = dump(io::to_json(bundle));
  if (cfg.out_dir.empty()) {
    std::cout << text;
  } else {
    Outputs out;
    out.add("constants.json", text);
    out.flush(cfg.out_dir);
    std::printf("ε=%.10g δ*=%.10g δ₋=%.10g λ*=%.10g\n", bundle.epsilon, bundle.delta_star, bundle.delta_low,
                bundle.lambda_star);
  }
  return kOk;
}

int cmd_solve(const RunConfig& cfg) {
  const RadialProblem problem = load(cfg);
  Outputs out;
  PairOutcome res = solve_pair(problem, cfg, out);
  out.add("summary.json", dump(res.summary));
  out.flush(cfg.out_dir);
  if (!res.summary.contains("small")) return kNoMultiplicity;
  return res.certified ? kOk : kVerifyFailed;
}

int cmd_sweep(const RunConfig& cfg) {
  if (cfg.lambda_grid.empty()) throw Error(ErrorKind::InvalidInput, "--lambda-grid is required");
  const std::vector<double> lambdas = parse_lambda_grid(cfg.lambda_grid);
  const RadialProblem problem = load(cfg);
  const auto rows = lambda_sweep(problem, lambdas, search_options(cfg));
  const std::string csv = io::sweep_csv(rows);
  if (cfg.out_dir.empty()) {
    std::cout << csv;
  } else {
    Outputs out;
    out.add("sweep.csv", csv);
    out.flush(cfg.out_dir);
    for (const auto& r : rows) std::printf("λ=%.10g solutions=%d\n", r.lambda, r.n_solutions);
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  const RadialProblem problem = load(cfg);
  if (cfg.profile_path.empty()) throw Error(ErrorKind::Io, "--profile is required");
  const GridProfile profile = io::read_profile_csv(cfg.profile_path);
  std::optional<ClaimContext> context;
  try {
    context = claim_context(compute_constants(problem, constants_options(cfg)));
  } catch (const Error& e) {
    if (!e.is_hypothesis_violation()) throw;
  }
  const Certificate cert = certify(problem, profile, Tolerances{}, context);
  const std::string text = dump(io::to_json(cert));
  if (cfg.out_dir.empty()) {
    std::cout << text;
  } else {
    Outputs out;
    out.add("certificate.json", text);
    out.flush(cfg.out_dir);
  }
  std::printf("certificate: %s\n", cert.overall ? "PASS" : "FAIL");
  for (const auto& f : cert.failures) std::printf("  %s\n", f.c_str());
  return cert.overall ? kOk : kVerifyFailed;
}

int cmd_figure1(const RunConfig& cfg) {
  const RadialProblem problem = figure1_problem();
  Outputs out;
  out.add("problem.json", dump(io::problem_to_json(problem)));
  out.add("weight.csv", io::weight_csv(problem, 2000));
  const SignStructure sign = detect_sign_structure(problem);
  PairOutcome res = solve_pair(problem, cfg, out);
  json zeros = json::array();
  for (const auto& iv : sign.intervals) {
    if (iv.sigma > 0.0) zeros.push_back(iv.sigma);
    if (iv.tau < problem.radius) zeros.push_back(iv.tau);
  }
  res.summary["weight_zeros"] = zeros;
  res.summary["sign_structure"] = io::to_json(sign);
  bool ok = res.certified;
  if (res.summary.contains("large")) {
    const bool sharp = res.summary["large"]["max_abs_slope"].get<double>() > 0.9;
    const bool ordered = res.summary["small"]["sup_norm"].get<double>() < res.summary["large"]["sup_norm"].get<double>();
    const bool oracle = res.summary["small"].value("oracle_match", false) && res.summary["large"].value("oracle_match", false);
    res.summary["sharp_cornered"] = sharp;
    res.summary["ordered"] = ordered;
    res.summary["oracle_agrees"] = oracle;
    ok = ok && sharp && ordered && oracle;
  }
  res.summary["ok"] = ok;
  out.add("summary.json", dump(res.summary));
  out.flush(cfg.out_dir.empty() ? std::string("figure1_out") : cfg.out_dir);
  if (!res.summary.contains("small")) return kNoMultiplicity;
  return ok ? kOk : kVerifyFailed;
}

int exit_code(const Error& e) {
  if (e.is_hypothesis_violation()) return kHypothesis;
  if (e.kind() == ErrorKind::Io || e.kind() == ErrorKind::InvalidInput) return kIo;
  return kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive radial Neumann solutions with Minkowski curvature"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool needs_problem) {
    auto* opt = sub->add_option("--problem", cfg.problem_path, "problem JSON file");
    if (needs_problem) opt->required();
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--grid", cfg.grid, "grid cells M")->check(CLI::Range(8, 10'000'000));
    sub->add_option("--tol", cfg.tol, "solver tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "recorded in outputs; the search is deterministic");
  };
  auto* constants = app.add_subcommand("constants", "δ*, δ₋, λ* and the empirical bounds");
  common(constants, true);
  auto* solve_cmd = app.add_subcommand("solve", "two positive solutions with certificates");
  common(solve_cmd, true);
  auto* sweep = app.add_subcommand("sweep", "solution counts over a λ grid");
  common(sweep, true);
  sweep->add_option("--lambda-grid", cfg.lambda_grid, "a:b:n, n evenly spaced values")->required();
  auto* verify = app.add_subcommand("verify", "certify a profile CSV");
  common(verify, true);
  verify->add_option("--profile", cfg.profile_path, "CSV with columns r,u,du")->required();
  auto* fig = app.add_subcommand("figure1", "built-in reproduction run");
  common(fig, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kIo;
  }

  try {
    if (*constants) return cmd_constants(cfg);
    if (*solve_cmd) return cmd_solve(cfg);
    if (*sweep) return cmd_sweep(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*fig) return cmd_figure1(cfg);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIo;
  }
  return kIo;
}
