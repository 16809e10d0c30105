#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maslov/matrix.hpp"
#include "maslov/problem.hpp"

namespace maslov {

/// Sampling of the curves command.
struct CurveGrid {
  double sMin = 0.02;
  int sCount = 50;
  int lambdaCount = 60;
  int eigenvalues = 4;
  std::optional<double> lambdaMin;  // default: min(-1, 1.1 x the lowest curve value)
};

struct Config {
  std::size_t n = 0;
  std::vector<std::vector<std::string>> potential;
  RealMatrix alpha1;
  RealMatrix alpha2;
  RealMatrix beta1;
  RealMatrix beta2;
  NumericSettings settings;
  CurveGrid grid;
  std::string name;
};

/// Throws SyntaxError or ValidationError (message names the failing invariant).
Config config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const Config& c);

/// The four built-in problems, k = 1..4.
Config builtin_config(int k);

/// A file path, or one of "example1".."example4".
Config read_config(const std::string& path_or_name);

/// Parses the potential, checks symmetry and finiteness, validates and normalizes the boundary pairs.
Problem build_problem(const Config& c);

Problem load_config(const std::string& path_or_name);

}  // namespace maslov
