#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "common.hpp"

using namespace minkrad;

TEST_SUITE("io") {
  TEST_CASE("problem JSON round trip") {
    const RadialProblem p = figure1_problem();
    const RadialProblem q = io::problem_from_json(io::problem_to_json(p));
    CHECK(q.dimension == 2);
    CHECK(q.lambda == 0.1);
    CHECK(q.weight(1.234) == p.weight(1.234));
    CHECK(q.nonlinearity(1.7) == p.nonlinearity(1.7));
    const RadialProblem d = io::problem_from_json(io::problem_to_json(testing::desk(3.0)));
    CHECK(d.weight.breakpoints(0.0, 3.0).size() == 2);
  }

  TEST_CASE("malformed problems are Io errors") {
    auto kind = [](const io::json& j) {
      try {
        io::problem_from_json(j);
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::Domain;
    };
    CHECK(kind(io::json::parse(R"({"N": 1})")) == ErrorKind::Io);
    CHECK(kind(io::json::parse(R"({"N": 1, "R": 1, "lambda": 1, "weight": {"kind": "spline"},
                                   "nonlinearity": {"kind": "power", "p": 2}})")) == ErrorKind::Io);
    CHECK_THROWS_AS(io::load_problem("/nonexistent/problem.json"), Error);
  }

  TEST_CASE("profile CSV round trip is lossless") {
    const Grid g = Grid::uniform(1.0, 7);
    std::vector<double> u, du;
    for (std::size_t i = 0; i < g.size(); ++i) {
      u.push_back(std::exp(g[i]) / 3.0);
      du.push_back(std::sin(g[i]) / 7.0);
    }
    const GridProfile p(g, u, du);
    const auto path = std::filesystem::temp_directory_path() / "minkrad_io_test.csv";
    io::write_profile_csv(path, p);
    const GridProfile q = io::read_profile_csv(path);
    std::filesystem::remove(path);
    REQUIRE(q.u.size() == u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      CHECK(q.u[i] == u[i]);
      CHECK(q.du[i] == du[i]);
      CHECK(q.grid[i] == g[i]);
    }
    CHECK(io::profile_csv(p).rfind("r,u,du\n", 0) == 0);
  }

  TEST_CASE("format and CSV shapes") {
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    SweepRow a{1.0, 0, {}, {}, ""}, b{2.0, 2, {0.5, 3.0}, {}, ""};
    const std::string csv = io::sweep_csv({a, b});
    CHECK(csv.rfind("lambda,n_solutions,norm_1,norm_2\n", 0) == 0);
    const std::string w = io::weight_csv(testing::desk(1.0), 6);
    CHECK(w.find("1,-1\n") != std::string::npos);
    CHECK(w.find("1,1\n") != std::string::npos);
  }

  TEST_CASE("bundle JSON carries provenance") {
    const RadialProblem p = testing::desk(1.0);
    ConstantsBundle b = compute_bundle(detect_sign_structure(p), p, 0.2);
    const io::json j = io::to_json(b);
    CHECK(j["provenance"]["lambda_star"] == "formula");
    CHECK(j["delta_star"].get<double>() == doctest::Approx(0.2));
  }
}
