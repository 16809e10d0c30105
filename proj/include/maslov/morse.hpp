#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maslov/boundary.hpp"
#include "maslov/problem.hpp"
#include "maslov/spectral_flow.hpp"

namespace maslov {

struct MorseReport {
  int principalMaslov = 0;
  int morB = 0;
  int morCorrection = 0;
  int morH = 0;
  std::optional<int> gamma1;
  std::optional<int> gamma3;
  std::optional<int> gamma4;
  std::optional<int> oracleCount;
  bool nondegenerate = true;
  /// H has a kernel: W has eigenvalue -1 at (s, lambda) = (1, 0).
  bool kernelAtCorner = false;
  std::map<std::string, std::vector<CrossingEvent>> crossings;
  /// Phase data of every traversed side, keyed like `crossings`.
  std::map<std::string, PhasePath> paths;

  /// Values the run actually used (s0 may have been reduced).
  double s0 = 0.0;
  double lambdaInf = 0.0;
  BottomShelfData shelf;
};

/// ||V||_inf + cushion / s0^2.
double lambda_infty(const Potential& v, double s0, double cushion = 4.0);

/// Smallest lambda_infty(...) * 2^k for which Gamma4 has no crossings.
double verified_lambda_infty(const Problem& p, double s0);

ShootingSystem shooting_system(const Problem& p);

BottomShelfData problem_shelf(const Problem& p);

struct TheoremOptions {
  /// Also traverse Gamma1, Gamma3 and Gamma4 (needed for the s0 check).
  bool fullBox = true;
};

MorseReport morse_via_theorem(const Problem& p, const TheoremOptions& options = {});

/// Mas on Gamma3, i.e. the number of negative eigenvalues counted directly.
int morse_via_gamma3(const Problem& p);

/// Number of eigenvalues of H below lambda0. Throws EigenvalueOnPath.
int count_below(const Problem& p, double lambda0);

struct PerturbationPrediction {
  std::vector<double> firstOrder;
  std::vector<double> secondOrder;
};

/// Small-s eigenvalues of H(s): s spec(B) off the kernel and s^2 spec(correction) on it.
PerturbationPrediction perturbation_prediction(const Problem& p, double s);

}  // namespace maslov
