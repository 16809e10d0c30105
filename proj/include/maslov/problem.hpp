#pragma once

#include <optional>

#include "maslov/boundary.hpp"
#include "maslov/shooting.hpp"

namespace maslov {

struct NumericSettings {
  int steps = 2000;
  double s0 = 0.05;
  std::optional<double> lambdaInf;
  int samples = 400;
  double cushion = 4.0;
  int maxDoublings = 10;
  int oracleMesh = 2000;
  /// Halve s0 (up to this many times) while Gamma1 disagrees with the bottom-shelf count.
  int maxS0Halvings = 8;
};

/// -y'' + V y on [0,1] with normalized separated boundary conditions.
struct Problem {
  std::size_t n = 0;
  Potential potential;
  BoundaryPair left;
  BoundaryPair right;
  NumericSettings settings;
};

/// Validates and normalizes both pairs. Throws ValidationError on a dimension mismatch.
Problem make_problem(const Potential& v, const RealMatrix& alpha1, const RealMatrix& alpha2,
                     const RealMatrix& beta1, const RealMatrix& beta2, NumericSettings settings = {});

}  // namespace maslov
