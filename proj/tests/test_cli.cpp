#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "maslov/commands.hpp"
#include "maslov/config.hpp"
#include "maslov/errors.hpp"
#include "maslov/expression.hpp"

using namespace maslov;
using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Triple {
  const char* src;
  double x;
  double value;
};

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("maslov_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("expression values") {
  const Triple table[] = {
      {"-22", 0.3, -22.0},
      {"10*sin(x)", 0.0, 0.0},
      {"-13+12*x^2", 1.0, -1.0},
      {"-13 + 12*x^2", 0.5, -10.0},
      {"-7*cos(x)", 0.0, -7.0},
      {"-10 - 5*x^2", 1.0, -15.0},
      {"2^3^2", 0.0, 512.0},
      {"-2^2", 0.0, 4.0},
      {"(1+2)*3", 0.0, 9.0},
      {"1+2*3", 0.0, 7.0},
      {"8/4/2", 0.0, 1.0},
      {"1-2-3", 0.0, -4.0},
      {"exp(0)", 0.0, 1.0},
      {"sqrt(x)", 0.25, 0.5},
      {"2.5e-1*4", 0.0, 1.0},
      {"cos(pi)", 0.0, -1.0},
      {"-0.7*cos(6*pi*x)/(2 + cos(6*pi*x))", 0.0, -0.7 / 3.0},
      {"--x", 0.4, 0.4},
      {"x*x - x", 0.5, -0.25},
      {"sin(pi*x)^2 + cos(pi*x)^2", 0.37, 1.0},
  };
  for (const auto& t : table) {
    CAPTURE(t.src);
    CHECK(std::abs(parse_expression(t.src)(t.x) - t.value) <= 1e-12);
  }
  CHECK(parse_expression("10*sin(x)").source() == "10*sin(x)");
}

TEST_CASE("expression syntax errors carry an offset") {
  try {
    parse_expression("1 + * x");
    FAIL("no error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 4);
    CHECK_FALSE(e.expected().empty());
  }
  CHECK_THROWS_AS(parse_expression("sin(x"), SyntaxError);
  CHECK_THROWS_AS(parse_expression("y"), SyntaxError);
  CHECK_THROWS_AS(parse_expression(""), SyntaxError);
  CHECK_THROWS_AS(parse_expression("1 2"), SyntaxError);
}

TEST_CASE("built-in configurations") {
  const Problem p1 = load_config("example1");
  CHECK(p1.n == 2);
  const RealMatrix v = p1.potential(0.5);
  CHECK(v(0, 0) == doctest::Approx(-22.0));
  CHECK(v(0, 1) == doctest::Approx(10 * std::sin(0.5)));
  CHECK(v(1, 0) == v(0, 1));
  CHECK(max_abs(p1.left.a1 - RealMatrix::identity(2)) < 1e-15);

  const Problem p2 = load_config("example2");
  CHECK(max_abs(p2.left.a2 - RealMatrix::identity(2)) < 1e-15);
  CHECK(p2.potential(0.0)(0, 0) == doctest::Approx(-0.13 - 0.7 / 3.0));
  CHECK_THROWS_AS(read_config("example5"), Error);
}

TEST_CASE("configuration with equal pairs is normalized") {
  json j = config_to_json(builtin_config(1));
  j["alpha1"] = json::array({json::array({1, 0}), json::array({0, 1})});
  j["alpha2"] = j["alpha1"];
  const Problem p = build_problem(config_from_json(j));
  const double r = std::sqrt(0.5);
  CHECK(max_abs(p.left.a1 - r * RealMatrix::identity(2)) < 1e-15);
  CHECK(max_abs(p.left.a2 - r * RealMatrix::identity(2)) < 1e-15);
}

TEST_CASE("configuration round trip is exact") {
  for (int k = 1; k <= 4; ++k) {
    const Config c = builtin_config(k);
    const Config back = config_from_json(json::parse(config_to_json(c).dump()));
    CHECK(back.potential == c.potential);
    CHECK(back.alpha1 == c.alpha1);
    CHECK(back.beta2 == c.beta2);
    const Problem a = build_problem(c), b = build_problem(back);
    CHECK(a.left.a1 == b.left.a1);
    CHECK(a.left.a2 == b.left.a2);
    CHECK(a.right.a1 == b.right.a1);
    CHECK(a.right.a2 == b.right.a2);
    CHECK(a.potential(0.3) == b.potential(0.3));
    CHECK(a.settings.s0 == b.settings.s0);
  }
}

TEST_CASE("configuration errors name the invariant") {
  json j = config_to_json(builtin_config(1));
  j["alpha1"] = json::array({json::array({1, 0}), json::array({0, 0})});
  j["alpha2"] = json::array({json::array({0, 0}), json::array({0, 0})});
  try {
    build_problem(config_from_json(j));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ValidationError);
  }
  j = config_to_json(builtin_config(1));
  j["potential"][0][1] = "x";
  CHECK_THROWS_AS(build_problem(config_from_json(j)), Error);
  j = config_to_json(builtin_config(1));
  j["potential"][0][0] = "1 +";
  CHECK_THROWS_AS(build_problem(config_from_json(j)), SyntaxError);
  CHECK_THROWS_AS(read_config("/nonexistent/config.json"), Error);
}

TEST_CASE("report JSON") {
  const auto dir = scratch_dir("report");
  std::ostringstream out;
  CommandOptions opts;
  opts.outDir = dir;
  opts.out = &out;
  CHECK(run_report(load_config("example1"), opts) == Ok);
  const json j = json::parse(out.str());
  CHECK(j["principalMaslov"] == -2);
  CHECK(j["morH"] == 2);
  CHECK(j["oracleCount"] == 2);
  CHECK(j["gamma1"] == 0);
  CHECK(j["gamma3"] == 2);
  CHECK(j["gamma4"] == 0);
  CHECK(j["nondegenerate"] == true);
  CHECK(j["crossings"]["gamma2"].size() == 2);
  CHECK(j.contains("settings"));
  CHECK(j["version"] == version());
  CHECK(json::parse(slurp(dir / "report.json")) == j);
  CHECK_FALSE(std::filesystem::exists(dir / "report.json.tmp"));
}

TEST_CASE("report fields for the Robin examples") {
  std::ostringstream out;
  CommandOptions opts;
  opts.out = &out;
  CHECK(run_report(load_config("example3"), opts) == Ok);
  json j = json::parse(out.str());
  CHECK(j["morB"] == 2);
  CHECK(j["morH"] == 3);
  out.str("");
  CHECK(run_report(load_config("example4"), opts) == Ok);
  j = json::parse(out.str());
  CHECK(j["morCorrection"] == 2);
  CHECK(j["morH"] == 3);
}

TEST_CASE("curves CSV files") {
  const auto dir = scratch_dir("curves");
  Config c = builtin_config(2);
  c.grid.sCount = 6;
  c.grid.lambdaCount = 5;
  c.grid.eigenvalues = 2;
  c.settings.oracleMesh = 400;
  std::ostringstream out;
  CommandOptions opts;
  opts.outDir = dir;
  opts.out = &out;
  CHECK(run_curves(build_problem(c), c.grid, opts) == Ok);
  std::istringstream curves(slurp(dir / "curves.csv"));
  std::string line;
  std::getline(curves, line);
  CHECK(line == "s,lambda1,lambda2,convention");
  int rows = 0;
  while (std::getline(curves, line)) ++rows;
  CHECK(rows == 6);
  std::istringstream field(slurp(dir / "phase_gap.csv"));
  std::getline(field, line);
  CHECK(line == "s,lambda,phase_gap");
  rows = 0;
  while (std::getline(field, line)) {
    ++rows;
    const double gap = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(gap >= 0.0);
    CHECK(gap <= kPi);
  }
  CHECK(rows == 30);
}

TEST_CASE("check table") {
  std::ostringstream out;
  CommandOptions opts;
  opts.out = &out;
  CHECK(run_check(load_config("example1"), opts) == Ok);
  CHECK(out.str().find("FAIL") == std::string::npos);
  CHECK(out.str().find("PASS  homotopy sum") != std::string::npos);
}

TEST_CASE("error JSON") {
  const json a = error_to_json(Error(ErrorCode::ValidationError, "bad"));
  CHECK(a["error"] == "ValidationError");
  try {
    parse_expression("(");
  } catch (const SyntaxError& e) {
    const json b = error_to_json(e);
    CHECK(b["error"] == "SyntaxError");
    CHECK(b["offset"] == 1);
    CHECK(json::parse(b.dump()) == b);
  }
}

}
