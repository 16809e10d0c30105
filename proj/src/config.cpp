#include "maslov/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "maslov/errors.hpp"
#include "maslov/expression.hpp"

namespace maslov {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ValidationError, what); }

RealMatrix matrix_from_json(const json& j, std::size_t n, const std::string& key) {
  if (!j.is_array() || j.size() != n) invalid(key + " must be an " + std::to_string(n) + "x" + std::to_string(n) + " array");
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != n) invalid(key + " row " + std::to_string(i) + " has the wrong length");
    for (std::size_t k = 0; k < n; ++k) {
      if (!row[k].is_number()) invalid(key + " entries must be numbers");
      m(i, k) = row[k].get<double>();
      if (!std::isfinite(m(i, k))) invalid(key + " entries must be finite");
    }
  }
  return m;
}

json matrix_to_json(const RealMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix scaled_identity(std::size_t n, double v) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = v;
  return m;
}

}  // namespace

Config config_from_json(const json& j) {
  if (!j.is_object()) invalid("configuration must be a JSON object");
  Config c;
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long>() < 1 || j["n"].get<long>() > 16) {
    invalid("n must be an integer in 1..16");
  }
  c.n = j["n"].get<std::size_t>();
  const std::size_t n = c.n;
  if (!j.contains("potential")) invalid("potential is missing");
  const json& pot = j["potential"];
  if (!pot.is_array() || pot.size() != n) invalid("potential must be an n x n array of strings");
  for (std::size_t i = 0; i < n; ++i) {
    if (!pot[i].is_array() || pot[i].size() != n) invalid("potential row " + std::to_string(i) + " has the wrong length");
    std::vector<std::string> row;
    for (std::size_t k = 0; k < n; ++k) {
      if (pot[i][k].is_string()) {
        row.push_back(pot[i][k].get<std::string>());
      } else if (pot[i][k].is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << pot[i][k].get<double>();
        row.push_back(os.str());
      } else {
        invalid("potential entries must be strings");
      }
    }
    c.potential.push_back(std::move(row));
  }
  for (const char* key : {"alpha1", "alpha2", "beta1", "beta2"}) {
    if (!j.contains(key)) invalid(std::string(key) + " is missing");
  }
  c.alpha1 = matrix_from_json(j["alpha1"], n, "alpha1");
  c.alpha2 = matrix_from_json(j["alpha2"], n, "alpha2");
  c.beta1 = matrix_from_json(j["beta1"], n, "beta1");
  c.beta2 = matrix_from_json(j["beta2"], n, "beta2");

  auto& s = c.settings;
  if (j.contains("s0")) s.s0 = j["s0"].get<double>();
  if (j.contains("lambdaInf") && !j["lambdaInf"].is_null()) s.lambdaInf = j["lambdaInf"].get<double>();
  if (j.contains("steps")) s.steps = j["steps"].get<int>();
  if (j.contains("meshN")) s.oracleMesh = j["meshN"].get<int>();
  if (j.contains("samples")) s.samples = j["samples"].get<int>();
  if (j.contains("cushion")) s.cushion = j["cushion"].get<double>();
  if (!(s.s0 > 0.0 && s.s0 < 1.0)) invalid("s0 must lie in (0, 1)");
  if (s.steps < 16) invalid("steps must be at least 16");
  if (s.oracleMesh < 64) invalid("meshN must be at least 64");
  if (s.samples < 2) invalid("samples must be at least 2");
  if (s.lambdaInf && !(*s.lambdaInf > 0.0)) invalid("lambdaInf must be positive");

  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (g.contains("sMin")) c.grid.sMin = g["sMin"].get<double>();
    if (g.contains("sCount")) c.grid.sCount = g["sCount"].get<int>();
    if (g.contains("lambdaCount")) c.grid.lambdaCount = g["lambdaCount"].get<int>();
    if (g.contains("eigenvalues")) c.grid.eigenvalues = g["eigenvalues"].get<int>();
    if (g.contains("lambdaMin")) c.grid.lambdaMin = g["lambdaMin"].get<double>();
    if (!(c.grid.sMin > 0.0 && c.grid.sMin <= 1.0)) invalid("grid.sMin must lie in (0, 1]");
    if (c.grid.sCount < 2 || c.grid.lambdaCount < 2) invalid("grid counts must be at least 2");
    if (c.grid.eigenvalues < 1 || c.grid.eigenvalues > 8) invalid("grid.eigenvalues must lie in 1..8");
  }
  if (j.contains("name")) c.name = j["name"].get<std::string>();
  return c;
}

json config_to_json(const Config& c) {
  json j;
  if (!c.name.empty()) j["name"] = c.name;
  j["n"] = c.n;
  j["potential"] = c.potential;
  j["alpha1"] = matrix_to_json(c.alpha1);
  j["alpha2"] = matrix_to_json(c.alpha2);
  j["beta1"] = matrix_to_json(c.beta1);
  j["beta2"] = matrix_to_json(c.beta2);
  j["s0"] = c.settings.s0;
  if (c.settings.lambdaInf) j["lambdaInf"] = *c.settings.lambdaInf;
  j["steps"] = c.settings.steps;
  j["meshN"] = c.settings.oracleMesh;
  j["samples"] = c.settings.samples;
  j["cushion"] = c.settings.cushion;
  json g;
  g["sMin"] = c.grid.sMin;
  g["sCount"] = c.grid.sCount;
  g["lambdaCount"] = c.grid.lambdaCount;
  g["eigenvalues"] = c.grid.eigenvalues;
  if (c.grid.lambdaMin) g["lambdaMin"] = *c.grid.lambdaMin;
  j["grid"] = g;
  return j;
}

Config builtin_config(int k) {
  Config c;
  c.n = 2;
  const double r = 1.0 / std::sqrt(2.0);
  const RealMatrix id = scaled_identity(2, 1.0);
  const RealMatrix zero(2, 2);
  switch (k) {
    case 1:
      c.potential = {{"-22", "10*sin(x)"}, {"10*sin(x)", "-20"}};
      c.alpha1 = id;
      c.alpha2 = zero;
      c.beta1 = id;
      c.beta2 = zero;
      break;
    case 2:
      c.potential = {{"-0.13 - 0.7*cos(6*pi*x)/(2 + cos(6*pi*x))", "0"}, {"0", "1"}};
      c.alpha1 = zero;
      c.alpha2 = id;
      c.beta1 = zero;
      c.beta2 = id;
      break;
    case 3:
      c.potential = {{"-13 + 12*x^2", "-7*cos(x)"}, {"-7*cos(x)", "-9"}};
      c.alpha1 = scaled_identity(2, r);
      c.alpha2 = scaled_identity(2, r);
      c.beta1 = zero;
      c.beta2 = id;
      break;
    case 4:
      c.potential = {{"-10 - 5*x^2", "-3*x"}, {"-3*x", "-5 - 7*x^2"}};
      c.alpha1 = scaled_identity(2, r);
      c.alpha2 = scaled_identity(2, r);
      c.beta1 = scaled_identity(2, r);
      c.beta2 = scaled_identity(2, r);
      break;
    default:
      invalid("built-in examples are numbered 1..4");
  }
  c.name = "example" + std::to_string(k);
  return c;
}

Config read_config(const std::string& path_or_name) {
  for (int k = 1; k <= 4; ++k) {
    if (path_or_name == "example" + std::to_string(k)) return builtin_config(k);
  }
  std::ifstream in(path_or_name);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path_or_name);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SyntaxError(e.byte, {"JSON"}, std::string("invalid JSON: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    invalid(std::string("configuration has a field of the wrong type: ") + e.what());
  }
}

Problem build_problem(const Config& c) {
  const std::size_t n = c.n;
  std::vector<Expression> entries;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) entries.push_back(parse_expression(c.potential[i][k]));
  auto eval = [entries, n](double x) {
    RealMatrix v(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) v(i, k) = entries[i * n + k](x);
    return v;
  };
  for (int g = 0; g <= 256; ++g) {
    const double x = g / 256.0;
    const RealMatrix v = eval(x);
    for (double e : v.data()) {
      if (!std::isfinite(e)) invalid("potential is not finite at x = " + std::to_string(x));
    }
    if (asymmetry(v) > 1e-9 * (1.0 + norm_inf(v))) {
      invalid("potential is not symmetric at x = " + std::to_string(x));
    }
  }
  Potential potential(n, eval);
  try {
    return make_problem(potential, c.alpha1, c.alpha2, c.beta1, c.beta2, c.settings);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError) throw;
    invalid(std::string("boundary conditions: ") + e.what());
  }
}

Problem load_config(const std::string& path_or_name) { return build_problem(read_config(path_or_name)); }

}  // namespace maslov
