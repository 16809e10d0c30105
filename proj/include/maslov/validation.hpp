#pragma once

#include <span>
#include <string>
#include <vector>

#include "maslov/morse.hpp"
#include "maslov/problem.hpp"
#include "maslov/spectral_flow.hpp"

namespace maslov {

/// Oracle eigenvalues of H(s) against the small-s predictions at one s.
struct PerturbationCheck {
  double s = 0.0;
  std::vector<double> predicted;  // ascending
  std::vector<double> oracle;     // the same number of lowest eigenvalues
  double maxRelativeError = 0.0;
};

/// Pairs the sorted predictions (first and second order together) with the lowest oracle eigenvalues.
/// Throws EmptyBottomShelf.
std::vector<PerturbationCheck> perturbation_checks(const Problem& p, std::span<const double> s_values,
                                                   int mesh);

/// Errors must be strictly smaller at every smaller s.
bool strictly_improving(const std::vector<PerturbationCheck>& checks);

/// Largest movement of an unwrapped phase against the clockwise direction in lambda:
/// max over steps and phases of (u_j(k+1) - u_j(k)) * sign(lambda(k+1) - lambda(k)), clipped at 0.
double lambda_monotonicity_violation(const PhasePath& path);

/// Largest recorded eigenvalue of the lambda crossing form over samples with s >= s_min.
/// The path must come from a lambda side traversed with recordOmegaLambda.
double max_omega_lambda(const PhasePath& path, double s, double s_min = 0.01);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Full consistency suite on one problem: box, oracle, numerical invariants and, when the
/// bottom shelf is nontrivial, the small-s slope check.
std::vector<CheckResult> consistency_checks(const Problem& p);

}  // namespace maslov
