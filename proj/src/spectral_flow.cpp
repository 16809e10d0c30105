#include "maslov/spectral_flow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

#include "maslov/errors.hpp"
#include "maslov/linalg.hpp"

namespace maslov {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kUnitarityFail = 1e-6;

double signed_difference(double to, double from) noexcept {
  return std::remainder(to - from, kTwoPi);
}

}  // namespace

PathSegment PathSegment::gamma1(double s0, double lambda_inf, int samples) {
  return {SegmentKind::Gamma1, s0, -lambda_inf, 0.0, samples};
}
PathSegment PathSegment::gamma2(double s0, int samples) {
  return {SegmentKind::Gamma2, 0.0, s0, 1.0, samples};
}
PathSegment PathSegment::gamma3(double lambda_inf, int samples) {
  return {SegmentKind::Gamma3, 1.0, 0.0, -lambda_inf, samples};
}
PathSegment PathSegment::gamma4(double s0, double lambda_inf, int samples) {
  return {SegmentKind::Gamma4, -lambda_inf, 1.0, s0, samples};
}
PathSegment PathSegment::lambda_slice(double s, double lambda_start, double lambda_end, int samples) {
  return {SegmentKind::CustomLambdaSlice, s, lambda_start, lambda_end, samples};
}
PathSegment PathSegment::s_slice(double lambda, double s_start, double s_end, int samples) {
  return {SegmentKind::CustomSSlice, lambda, s_start, s_end, samples};
}

const char* segment_name(SegmentKind kind) noexcept {
  switch (kind) {
    case SegmentKind::Gamma1: return "gamma1";
    case SegmentKind::Gamma2: return "gamma2";
    case SegmentKind::Gamma3: return "gamma3";
    case SegmentKind::Gamma4: return "gamma4";
    case SegmentKind::CustomLambdaSlice: return "lambda-slice";
    case SegmentKind::CustomSSlice: return "s-slice";
  }
  return "segment";
}

double circular_distance(double a, double b) noexcept { return std::abs(signed_difference(a, b)); }

ComplexMatrix wtilde(const Frame& f, const ComplexMatrix& factor) {
  const RealMatrix t = inv_sqrt_spd(f.X.transpose() * f.X + f.Z.transpose() * f.Z);
  const RealMatrix x = f.X * t;
  const RealMatrix z = f.Z * t;
  const ComplexMatrix plus = complexify(x, z);
  const ComplexMatrix minus = complexify(x, -z);
  return plus * solve(minus, factor);
}

double unitarity_defect(const ComplexMatrix& w) {
  return norm_inf(w.adjoint() * w - ComplexMatrix::identity(w.rows()));
}

std::vector<double> eigen_phases(const ComplexMatrix& w) {
  const double defect = unitarity_defect(w);
  if (defect > kUnitarityFail) {
    throw Error(ErrorCode::NotUnitary, "unitarity defect " + std::to_string(defect));
  }
  std::vector<double> phases;
  for (const Complex& z : complex_eig(w)) {
    double a = std::arg(z);
    if (a <= -kPi) a += kTwoPi;
    phases.push_back(a);
  }
  std::sort(phases.begin(), phases.end());
  return phases;
}

PhaseMatch match_phases(std::span<const double> prev, std::span<const double> next) {
  const std::size_t n = prev.size();
  if (next.size() != n) throw Error(ErrorCode::ValidationError, "phase lists differ in length");
  PhaseMatch best;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  auto cost = [&](const std::vector<std::size_t>& p) {
    double total = 0.0, worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = circular_distance(next[p[j]], prev[j]);
      total += d;
      worst = std::max(worst, d);
    }
    return std::pair{total, worst};
  };
  if (n <= 6) {
    double best_total = std::numeric_limits<double>::infinity();
    do {
      const auto [total, worst] = cost(perm);
      if (total < best_total - 1e-15) {
        best_total = total;
        best.permutation = perm;
        best.maxDistance = worst;
        best.totalDistance = total;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  std::vector<bool> used(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t pick = n;
    double d_best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (used[k]) continue;
      const double d = circular_distance(next[k], prev[j]);
      if (d < d_best) {
        d_best = d;
        pick = k;
      }
    }
    used[pick] = true;
    perm[j] = pick;
  }
  // Pairwise swaps until no improvement.
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        const double now = circular_distance(next[perm[a]], prev[a]) + circular_distance(next[perm[b]], prev[b]);
        const double swapped = circular_distance(next[perm[b]], prev[a]) + circular_distance(next[perm[a]], prev[b]);
        if (swapped < now - 1e-15) {
          std::swap(perm[a], perm[b]);
          improved = true;
        }
      }
  }
  best.permutation = perm;
  std::tie(best.totalDistance, best.maxDistance) = cost(perm);
  return best;
}

namespace {

/// Uniform in s; uniform in sqrt(-lambda) on lambda sides with lambda <= 0.
double sample_coordinate(const PathSegment& segment, int k, int samples) {
  if (k == samples) return segment.end;
  if (segment.varies_lambda() && segment.start <= 0.0 && segment.end <= 0.0) {
    const double a = std::sqrt(-segment.start);
    const double b = std::sqrt(-segment.end);
    const double u = a + (b - a) * k / samples;
    return -u * u;
  }
  return segment.start + (segment.end - segment.start) * k / samples;
}

struct Evaluation {
  double t = 0.0;
  std::vector<double> phases;  // ascending
  Complex det;
  double winding = 0.0;
  double unitarity = 0.0;
  double lagrangian = 0.0;
  std::optional<double> omega;
};

struct Tracked {
  double t = 0.0;
  std::vector<double> phases;
  std::vector<double> unwrapped;
  Complex det;
  double winding = 0.0;
  double unitarity = 0.0;
  double lagrangian = 0.0;
  std::optional<double> omega;
};

class Evaluator {
 public:
  Evaluator(const PathSegment& segment, const ShootingSystem& system, bool omega, int samples)
      : segment_(segment), system_(system), omega_(omega) {
    if (!segment_.varies_lambda()) {
      const double lambda = segment_.fixed;
      h_max_ = 1.0 / effective_steps(1.0, lambda, system_.steps);
      frames_.emplace(0.0, initial_frame(system_.left, lambda));
      // One sweep in increasing s over the sample grid, so later lookups only continue short pieces.
      std::vector<double> grid;
      for (int k = 0; k <= samples; ++k) grid.push_back(sample_coordinate(segment_, k, samples));
      std::sort(grid.begin(), grid.end());
      for (double t : grid) frame(t);
    }
  }

  Frame frame(double t) {
    if (segment_.varies_lambda()) {
      return integrate_frame(system_.left, system_.potential, t, segment_.fixed, system_.steps);
    }
    auto it = frames_.upper_bound(t);
    --it;
    if (it->first == t) return it->second;
    Frame f = advance_frame(it->second, system_.potential, t, h_max_);
    frames_.emplace(t, f);
    return f;
  }

  Evaluation operator()(double t) {
    const Frame f = frame(t);
    const ComplexMatrix w = wtilde(f, system_.target.factor);
    Evaluation e;
    e.t = t;
    e.unitarity = unitarity_defect(w);
    e.phases = eigen_phases(w);
    e.det = determinant(w);
    e.winding = f.winding;
    e.lagrangian = relative_lagrangian_defect(f);
    if (omega_) {
      const auto eig = hermitian_eigenvalues(omega_lambda(f, system_.target.factor));
      e.omega = eig.back();
    }
    return e;
  }

 private:
  const PathSegment& segment_;
  const ShootingSystem& system_;
  bool omega_;
  double h_max_ = 0.0;
  std::map<double, Frame> frames_;
};

Tracked start_tracking(const Evaluation& e) {
  return {e.t, e.phases, e.phases, e.det, e.winding, e.unitarity, e.lagrangian, e.omega};
}

/// Full turns of the summed phases between a and e that matching cannot see.
long missed_turns(const Tracked& a, const Evaluation& e, const PhaseMatch& match) {
  const double expected = 2.0 * (e.winding - a.winding);
  if (!std::isfinite(expected)) return 0;
  double turned = 0.0;
  for (std::size_t j = 0; j < a.phases.size(); ++j)
    turned += signed_difference(e.phases[match.permutation[j]], a.phases[j]);
  return std::lround((expected - turned) / kTwoPi);
}

/// Matches e onto a; missed full turns are credited to the track nearest pi.
Tracked continue_tracking(const Tracked& a, const Evaluation& e, double* det_mismatch = nullptr) {
  const auto match = match_phases(a.phases, e.phases);
  Tracked b{e.t, {}, {}, e.det, e.winding, e.unitarity, e.lagrangian, e.omega};
  const std::size_t n = a.phases.size();
  b.phases.resize(n);
  b.unwrapped.resize(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    b.phases[j] = e.phases[match.permutation[j]];
    const double step = signed_difference(b.phases[j], a.phases[j]);
    b.unwrapped[j] = a.unwrapped[j] + step;
    total += step;
  }
  if (const long turns = missed_turns(a, e, match); turns != 0 && n > 0) {
    std::size_t nearest = 0;
    for (std::size_t j = 1; j < n; ++j)
      if (circular_distance(b.phases[j], kPi) < circular_distance(b.phases[nearest], kPi)) nearest = j;
    b.unwrapped[nearest] += kTwoPi * static_cast<double>(turns);
  }
  if (det_mismatch != nullptr) {
    const double winding = std::arg(e.det / a.det);
    *det_mismatch = circular_distance(winding, total);
  }
  return b;
}

/// Number of completed passages through pi: floor((u - pi) / 2 pi) with snapping onto pi + 2 pi m.
long arc_level(double u, double snap) {
  const double m = std::round((u - kPi) / kTwoPi);
  const double anchor = kPi + kTwoPi * m;
  if (std::abs(u - anchor) <= snap) return static_cast<long>(m);
  return static_cast<long>(std::floor((u - kPi) / kTwoPi));
}

int count_near_pi(const std::vector<double>& phases, double tol) {
  return static_cast<int>(std::count_if(phases.begin(), phases.end(),
                                        [&](double p) { return circular_distance(p, kPi) <= tol; }));
}

}  // namespace

PhasePath spectral_flow(const PathSegment& segment, const ShootingSystem& system,
                        const SpectralFlowOptions& options) {
  if (segment.start == segment.end) {
    throw Error(ErrorCode::ValidationError, "path segment has zero length");
  }
  const int samples = std::max(2, options.samples.value_or(segment.samples));
  Evaluator eval(segment, system, options.recordOmegaLambda, samples);
  const double span = segment.end - segment.start;
  const double snap = options.snapTolerance;

  PhasePath path;
  auto record = [&](const Tracked& t) {
    PhaseSample s{t.t, t.phases, t.unwrapped, t.unitarity, t.lagrangian, t.omega};
    path.maxUnitarityDefect = std::max(path.maxUnitarityDefect, t.unitarity);
    path.maxLagrangianDefect = std::max(path.maxLagrangianDefect, t.lagrangian);
    path.samples.push_back(std::move(s));
  };

  auto level_sum = [&](const Tracked& t) {
    long total = 0;
    for (double u : t.unwrapped) total += arc_level(u, snap);
    return total;
  };
  std::vector<CrossingEvent> raw;
  std::vector<int> near_counts;
  // Bisection on the total level, which does not depend on how tracks are labelled.
  auto locate = [&](auto&& self, const Tracked& a, const Evaluation& b_eval, long level_a, long level_b) -> void {
    if (level_a == level_b) return;
    if (std::abs(b_eval.t - a.t) <= options.locateTolerance) {
      const double at = 0.5 * (a.t + b_eval.t);
      const long delta = level_b - level_a;
      raw.push_back({at, static_cast<int>(std::abs(delta)), delta > 0 ? 1 : -1});
      near_counts.push_back(count_near_pi(eval(at).phases, options.multiplicityTolerance));
      return;
    }
    const Evaluation m_eval = eval(0.5 * (a.t + b_eval.t));
    const Tracked m = continue_tracking(a, m_eval);
    const long level_m = level_sum(m);
    self(self, a, m_eval, level_a, level_m);
    self(self, m, b_eval, level_m, level_b);
  };

  Tracked a = start_tracking(eval(segment.start));
  record(a);
  const Tracked first = a;
  for (int k = 1; k <= samples; ++k) {
    const double t_next = sample_coordinate(segment, k, samples);
    std::vector<Evaluation> pending{eval(t_next)};
    while (!pending.empty()) {
      const Evaluation& b_eval = pending.back();
      const auto match = match_phases(a.phases, b_eval.phases);
      const bool too_far = match.maxDistance > options.maxPhaseStep || match.totalDistance > options.maxTotalStep;
      const bool unresolved = too_far || missed_turns(a, b_eval, match) != 0;
      if (unresolved && (too_far || std::abs(b_eval.t - a.t) >= options.minStep)) {
        if (std::abs(b_eval.t - a.t) < options.minStep) {
          throw Error(ErrorCode::RefinementExhausted,
                      std::string(segment_name(segment.kind)) + ": phase jump " +
                          std::to_string(match.maxDistance) + " near " + std::to_string(a.t));
        }
        pending.push_back(eval(0.5 * (a.t + b_eval.t)));
        continue;
      }
      double mismatch = 0.0;
      Tracked b = continue_tracking(a, b_eval, &mismatch);
      const Evaluation end = b_eval;
      pending.pop_back();
      path.maxDetMismatch = std::max(path.maxDetMismatch, mismatch);
      if (options.locate) {
        locate(locate, a, end, level_sum(a), level_sum(b));
      }
      record(b);
      a = std::move(b);
    }
  }

  path.index = static_cast<int>(level_sum(a) - level_sum(first));

  // Merge events of several tracks at one location.
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const double dir = span > 0 ? 1.0 : -1.0;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return dir * raw[x].location < dir * raw[y].location; });
  for (std::size_t idx : order) {
    const CrossingEvent& ev = raw[idx];
    if (!path.crossings.empty()) {
      CrossingEvent& last = path.crossings.back();
      if (last.direction == ev.direction &&
          std::abs(last.location - ev.location) <= options.multiplicityTolerance) {
        last.multiplicity += ev.multiplicity;
        last.multiplicity = std::max(last.multiplicity, near_counts[idx]);
        continue;
      }
    }
    CrossingEvent merged = ev;
    merged.multiplicity = std::max(merged.multiplicity, near_counts[idx]);
    path.crossings.push_back(merged);
  }
  return path;
}

std::vector<CrossingEvent> locate_crossings(const PathSegment& segment, const ShootingSystem& system,
                                            const SpectralFlowOptions& options) {
  SpectralFlowOptions opts = options;
  opts.locate = true;
  return spectral_flow(segment, system, opts).crossings;
}

std::vector<DirichletCrossing> dirichlet_kernel_crossings(const BoundaryPair& bc0, const Potential& v,
                                                          std::span<const double> s_grid, int steps) {
  std::vector<DirichletCrossing> out;
  if (s_grid.size() < 2) return out;
  const std::size_t n = bc0.n();
  const BoundaryPair dirichlet =
      normalize_pair(validate_pair(RealMatrix::identity(n), RealMatrix(n, n), Side::Right));
  const ShootingSystem sys{bc0, v, target_data(dirichlet), steps};
  SpectralFlowOptions opts;
  opts.samples = static_cast<int>(s_grid.size()) - 1;
  const auto segment = PathSegment::s_slice(0.0, s_grid.front(), s_grid.back());
  for (const auto& e : spectral_flow(segment, sys, opts).crossings) out.push_back({e.location, e.multiplicity});
  return out;
}

BoxResult maslov_box(const ShootingSystem& system, double s0, double lambda_inf,
                     const SpectralFlowOptions& options) {
  if (!(s0 > 0.0 && s0 < 1.0)) throw Error(ErrorCode::ValidationError, "s0 must lie in (0, 1)");
  if (!(lambda_inf > 0.0)) throw Error(ErrorCode::ValidationError, "lambda_inf must be positive");
  const int samples = options.samples.value_or(400);
  const std::array<PathSegment, 4> segments{
      PathSegment::gamma1(s0, lambda_inf, samples), PathSegment::gamma2(s0, samples),
      PathSegment::gamma3(lambda_inf, samples), PathSegment::gamma4(s0, lambda_inf, samples)};
  BoxResult box;
  for (std::size_t k = 0; k < 4; ++k) {
    box.paths[k] = spectral_flow(segments[k], system, options);
    box.indices[k] = box.paths[k].index;
  }
  if (box.sum() != 0) {
    throw Error(ErrorCode::HomotopyCheckFailed,
                "box indices " + std::to_string(box.indices[0]) + ", " + std::to_string(box.indices[1]) +
                    ", " + std::to_string(box.indices[2]) + ", " + std::to_string(box.indices[3]) +
                    " do not sum to zero");
  }
  return box;
}

ComplexMatrix omega_lambda(const Frame& f, const ComplexMatrix& factor) {
  const ComplexMatrix a = solve(complexify(f.X, -f.Z), factor);
  ComplexMatrix out = Complex(-2.0) * (a.adjoint() * complexify(f.gram) * a);
  return 0.5 * (out + out.adjoint());
}

ComplexMatrix omega_s(const Frame& f, const ComplexMatrix& factor, const Potential& v, double lambda) {
  const std::size_t n = f.X.rows();
  const ComplexMatrix a = solve(complexify(f.X, -f.Z), factor);
  const RealMatrix inner = f.X.transpose() * (v(f.s) - lambda * RealMatrix::identity(n)) * f.X -
                           f.Z.transpose() * f.Z;
  ComplexMatrix out = Complex(2.0) * (a.adjoint() * complexify(inner) * a);
  return 0.5 * (out + out.adjoint());
}

}  // namespace maslov
