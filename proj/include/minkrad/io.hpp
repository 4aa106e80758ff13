#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "minkrad/constants.hpp"
#include "minkrad/grid.hpp"
#include "minkrad/problem.hpp"
#include "minkrad/shooting.hpp"
#include "minkrad/solver.hpp"
#include "minkrad/verify.hpp"

namespace minkrad::io {

using nlohmann::json;

/// Problem file:
///   {"N": 2, "R": 5, "lambda": 0.1,
///    "weight": {"kind": "cosine-shifted", "center": 5, "phase": 1, "exponent": 1.5}
///            | {"kind": "piecewise-constant", "breakpoints": [...], "values": [...]}
///            | {"kind": "table", "r": [...], "a": [...]},
///    "nonlinearity": {"kind": "power", "p": 2}
///                  | {"kind": "power-sum", "p": 2, "q": 3}
///                  | {"kind": "table", "u": [...], "g": [...]}
///                  | {"kind": "exponential"}}
/// Throws Error(Io) on malformed input.
RadialProblem problem_from_json(const json& j);
json problem_to_json(const RadialProblem& problem);
RadialProblem load_problem(const std::filesystem::path& path);

json to_json(const ConstantsBundle& bundle);
json to_json(const Certificate& certificate);
json to_json(const SolveReport& report);
json to_json(const SignStructure& structure);

/// "%.17g"
std::string format_double(double x);

/// Columns r,u,du with a header row.
std::string profile_csv(const GridProfile& profile);
void write_profile_csv(const std::filesystem::path& path, const GridProfile& profile);
GridProfile read_profile_csv(const std::filesystem::path& path);

/// Columns r,a on `cells` uniform cells plus both one-sided values at every breakpoint.
std::string weight_csv(const RadialProblem& problem, int cells);

/// Columns lambda,n_solutions,norm_1..norm_k (k = widest row; short rows padded empty).
std::string sweep_csv(const std::vector<SweepRow>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace minkrad::io
