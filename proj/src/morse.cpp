#include "maslov/morse.hpp"

#include <cmath>
#include <string>

#include "maslov/errors.hpp"
#include "maslov/linalg.hpp"

namespace maslov {

namespace {

constexpr double kCornerTolerance = 1e-6;
constexpr double kPathEndTolerance = 1e-8;
constexpr int kSampleDoublings = 2;

bool phase_at_minus_one(const PhasePath& path, bool at_end, double tol) {
  if (path.samples.empty()) return false;
  const auto& sample = at_end ? path.samples.back() : path.samples.front();
  for (double p : sample.phases)
    if (circular_distance(p, 3.14159265358979323846) <= tol) return true;
  return false;
}

struct ClearGamma4 {
  double lambdaInf = 0.0;
  PhasePath path;
};

ClearGamma4 clear_gamma4(const Problem& p, const ShootingSystem& sys, double s0) {
  const auto& cfg = p.settings;
  double lam = cfg.lambdaInf.value_or(lambda_infty(p.potential, s0, cfg.cushion));
  SpectralFlowOptions opts;
  opts.samples = cfg.samples;
  for (int k = 0; k <= cfg.maxDoublings; ++k) {
    PhasePath path = spectral_flow(PathSegment::gamma4(s0, lam, cfg.samples), sys, opts);
    if (path.crossings.empty() && path.index == 0) return {lam, std::move(path)};
    lam *= 2.0;
  }
  throw Error(ErrorCode::HomotopyCheckFailed,
              "lambda_inf doubling did not clear the bottom side of the box");
}

}  // namespace

Problem make_problem(const Potential& v, const RealMatrix& alpha1, const RealMatrix& alpha2,
                     const RealMatrix& beta1, const RealMatrix& beta2, NumericSettings settings) {
  const std::size_t n = v.n();
  if (alpha1.rows() != n || beta1.rows() != n) {
    throw Error(ErrorCode::ValidationError, "boundary matrices do not match the potential dimension");
  }
  Problem p;
  p.n = n;
  p.potential = v;
  p.left = normalize_pair(validate_pair(alpha1, alpha2, Side::Left));
  p.right = normalize_pair(validate_pair(beta1, beta2, Side::Right));
  p.settings = settings;
  return p;
}

double lambda_infty(const Potential& v, double s0, double cushion) {
  if (!(s0 > 0.0 && s0 < 1.0)) throw Error(ErrorCode::ValidationError, "s0 must lie in (0, 1)");
  return v.sup_norm(1024) + cushion / (s0 * s0);
}

double verified_lambda_infty(const Problem& p, double s0) {
  return clear_gamma4(p, shooting_system(p), s0).lambdaInf;
}

ShootingSystem shooting_system(const Problem& p) {
  return {p.left, p.potential.memoized(), target_data(p.right), p.settings.steps};
}

BottomShelfData problem_shelf(const Problem& p) {
  return bottom_shelf(bk_decompose(p.left), bk_decompose(p.right), p.potential(0.0));
}

MorseReport morse_via_theorem(const Problem& p, const TheoremOptions& options) {
  const auto& cfg = p.settings;
  MorseReport r;
  r.shelf = problem_shelf(p);
  r.morB = r.shelf.dimension() == 0 ? 0 : count_negative(r.shelf.bEigenvalues, r.shelf.kernelTolerance);
  r.morCorrection = count_negative(r.shelf.correctionEigenvalues, r.shelf.degeneracyTolerance);
  r.nondegenerate = r.shelf.nondegenerate;

  const ShootingSystem sys = shooting_system(p);
  SpectralFlowOptions opts;
  opts.samples = cfg.samples;
  double s0 = cfg.s0;
  std::optional<PhasePath> gamma3;
  int refinements = 0;
  for (int attempt = 0;; ++attempt) {
    const int samples = opts.samples.value_or(cfg.samples);
    const PhasePath g2 = spectral_flow(PathSegment::gamma2(s0, samples), sys, opts);
    r.principalMaslov = g2.index;
    r.crossings["gamma2"] = g2.crossings;
    r.paths["gamma2"] = g2;
    r.kernelAtCorner = phase_at_minus_one(g2, true, kCornerTolerance);
    r.s0 = s0;
    if (!options.fullBox) break;

    ClearGamma4 g4 = clear_gamma4(p, sys, s0);
    r.lambdaInf = g4.lambdaInf;
    const PhasePath g1 = spectral_flow(PathSegment::gamma1(s0, g4.lambdaInf, samples), sys, opts);
    if (!gamma3) gamma3 = spectral_flow(PathSegment::gamma3(g4.lambdaInf, samples), sys, opts);
    r.gamma1 = g1.index;
    r.gamma3 = gamma3->index;
    r.gamma4 = g4.path.index;
    r.crossings["gamma1"] = g1.crossings;
    r.crossings["gamma3"] = gamma3->crossings;
    r.crossings["gamma4"] = g4.path.crossings;
    r.paths["gamma1"] = g1;
    r.paths["gamma3"] = *gamma3;
    r.paths["gamma4"] = g4.path;
    const int sum = *r.gamma1 + r.principalMaslov + *r.gamma3 + *r.gamma4;
    if (sum != 0 && refinements < kSampleDoublings) {
      ++refinements;
      opts.samples = 2 * opts.samples.value_or(cfg.samples);
      gamma3.reset();
      --attempt;
      continue;
    }
    if (sum != 0) {
      throw Error(ErrorCode::HomotopyCheckFailed,
                  "box indices sum to " + std::to_string(sum) + " at s0 = " + std::to_string(s0));
    }
    const bool shelf_consistent = *r.gamma1 == -(r.morB + r.morCorrection);
    if (shelf_consistent || !r.nondegenerate || attempt >= cfg.maxS0Halvings) break;
    s0 *= 0.5;
  }
  r.morH = -r.principalMaslov + r.morB + r.morCorrection;
  return r;
}

int morse_via_gamma3(const Problem& p) {
  const ShootingSystem sys = shooting_system(p);
  const double lam = clear_gamma4(p, sys, p.settings.s0).lambdaInf;
  SpectralFlowOptions opts;
  opts.samples = p.settings.samples;
  return spectral_flow(PathSegment::gamma3(lam, p.settings.samples), sys, opts).index;
}

int count_below(const Problem& p, double lambda0) {
  Problem shifted = p;
  shifted.potential = p.potential.shifted(lambda0);
  shifted.settings.lambdaInf.reset();
  const MorseReport r = morse_via_theorem(shifted);
  if (r.kernelAtCorner) {
    throw Error(ErrorCode::EigenvalueOnPath, std::to_string(lambda0) + " is an eigenvalue of H");
  }
  for (const auto& c : r.crossings.at("gamma2")) {
    if (std::abs(c.location - 1.0) <= kPathEndTolerance || std::abs(c.location - r.s0) <= kPathEndTolerance) {
      throw Error(ErrorCode::EigenvalueOnPath, "crossing at a corner of the shifted box");
    }
  }
  return r.morH;
}

PerturbationPrediction perturbation_prediction(const Problem& p, double s) {
  const BottomShelfData shelf = problem_shelf(p);
  if (shelf.dimension() == 0) {
    throw Error(ErrorCode::EmptyBottomShelf, "ker P_D0 and ker P_D1 intersect trivially");
  }
  PerturbationPrediction out;
  for (double mu : shelf.bEigenvalues)
    if (std::abs(mu) > shelf.kernelTolerance) out.firstOrder.push_back(s * mu);
  for (double nu : shelf.correctionEigenvalues) out.secondOrder.push_back(s * s * nu);
  return out;
}

}  // namespace maslov
