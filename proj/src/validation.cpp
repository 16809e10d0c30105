#include "maslov/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "maslov/errors.hpp"
#include "maslov/oracle.hpp"

namespace maslov {

namespace {

constexpr double kLagrangianBound = 1e-9;
constexpr double kUnitarityBound = 1e-8;
constexpr double kDetBound = 1e-6;
constexpr double kMonotonicityBound = 1e-9;
constexpr double kAsymptoticBound = 0.15;

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::vector<PerturbationCheck> perturbation_checks(const Problem& p, std::span<const double> s_values,
                                                   int mesh) {
  std::vector<PerturbationCheck> out;
  for (double s : s_values) {
    const PerturbationPrediction pred = perturbation_prediction(p, s);
    PerturbationCheck c;
    c.s = s;
    c.predicted = pred.firstOrder;
    c.predicted.insert(c.predicted.end(), pred.secondOrder.begin(), pred.secondOrder.end());
    std::sort(c.predicted.begin(), c.predicted.end());
    c.oracle = oracle::lowest_eigenvalues(oracle::assemble(p, s, mesh), static_cast<int>(c.predicted.size()));
    for (std::size_t k = 0; k < c.predicted.size(); ++k) {
      const double scale = std::abs(c.predicted[k]);
      const double err = std::abs(c.oracle[k] - c.predicted[k]);
      c.maxRelativeError = std::max(c.maxRelativeError, scale > 0.0 ? err / scale : err);
    }
    out.push_back(std::move(c));
  }
  return out;
}

bool strictly_improving(const std::vector<PerturbationCheck>& checks) {
  std::vector<PerturbationCheck> sorted = checks;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.s < b.s; });
  for (std::size_t k = 1; k < sorted.size(); ++k)
    if (!(sorted[k - 1].maxRelativeError < sorted[k].maxRelativeError)) return false;
  return true;
}

double lambda_monotonicity_violation(const PhasePath& path) {
  double worst = 0.0;
  for (std::size_t k = 1; k < path.samples.size(); ++k) {
    const auto& a = path.samples[k - 1];
    const auto& b = path.samples[k];
    const double dir = b.coordinate > a.coordinate ? 1.0 : -1.0;
    for (std::size_t j = 0; j < a.unwrapped.size(); ++j)
      worst = std::max(worst, (b.unwrapped[j] - a.unwrapped[j]) * dir);
  }
  return worst;
}

double max_omega_lambda(const PhasePath& path, double s, double s_min) {
  double worst = -std::numeric_limits<double>::infinity();
  if (s < s_min) return worst;
  for (const auto& sample : path.samples) {
    if (!sample.omegaLambdaMax) {
      throw Error(ErrorCode::ValidationError, "path was traced without the lambda crossing form");
    }
    worst = std::max(worst, *sample.omegaLambdaMax);
  }
  return worst;
}

std::vector<CheckResult> consistency_checks(const Problem& p) {
  std::vector<CheckResult> rows;
  MorseReport r;
  try {
    r = morse_via_theorem(p);
    rows.push_back({"homotopy sum", true,
                    num(*r.gamma1) + " + " + num(r.principalMaslov) + " + " + num(*r.gamma3) + " + " +
                        num(*r.gamma4) + " = 0"});
  } catch (const Error& e) {
    rows.push_back({"homotopy sum", false, e.what()});
    return rows;
  }

  rows.push_back({"gamma4 empty", r.crossings.at("gamma4").empty(),
                  num(static_cast<double>(r.crossings.at("gamma4").size())) + " crossings"});
  rows.push_back({"gamma3 count", *r.gamma3 == r.morH,
                  "gamma3 " + num(*r.gamma3) + ", theorem " + num(r.morH)});
  try {
    const int oc = oracle::mesh_stable_negative_count(p, std::max(64, p.settings.oracleMesh / 2));
    rows.push_back({"oracle count", oc == r.morH, "oracle " + num(oc) + ", theorem " + num(r.morH)});
  } catch (const Error& e) {
    rows.push_back({"oracle count", false, e.what()});
  }

  double lag = 0.0, uni = 0.0, det = 0.0;
  for (const auto& [name, path] : r.paths) {
    lag = std::max(lag, path.maxLagrangianDefect);
    uni = std::max(uni, path.maxUnitarityDefect);
    det = std::max(det, path.maxDetMismatch);
  }
  rows.push_back({"lagrangian defect", lag <= kLagrangianBound, num(lag)});
  rows.push_back({"unitarity defect", uni <= kUnitarityBound, num(uni)});
  rows.push_back({"det winding", det <= kDetBound, num(det)});

  SpectralFlowOptions opts;
  opts.samples = p.settings.samples;
  opts.recordOmegaLambda = true;
  const PhasePath g3 =
      spectral_flow(PathSegment::gamma3(r.lambdaInf, p.settings.samples), shooting_system(p), opts);
  const double violation = lambda_monotonicity_violation(g3);
  rows.push_back({"gamma3 monotone", violation <= kMonotonicityBound, num(violation)});
  const double omega = max_omega_lambda(g3, 1.0);
  rows.push_back({"omega_lambda negative", omega < 0.0, "largest eigenvalue " + num(omega)});

  if (r.shelf.dimension() > 0) {
    const std::vector<double> s_values{0.08, 0.04, 0.02};
    const auto checks = perturbation_checks(p, s_values, p.settings.oracleMesh);
    std::string detail;
    for (const auto& c : checks) detail += (detail.empty() ? "" : ", ") + ("s=" + num(c.s) + ": " + num(c.maxRelativeError));
    const bool ok = checks.back().maxRelativeError <= kAsymptoticBound && strictly_improving(checks);
    rows.push_back({"small-s asymptotics", ok, detail});
  }
  rows.push_back({"nondegenerate", r.nondegenerate, r.nondegenerate ? "correction invertible" : "0 in spec(correction)"});
  return rows;
}

}  // namespace maslov
