#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "maslov/boundary.hpp"
#include "maslov/matrix.hpp"
#include "maslov/shooting.hpp"

namespace maslov {

enum class SegmentKind { Gamma1, Gamma2, Gamma3, Gamma4, CustomLambdaSlice, CustomSSlice };

/// A straight piece of the (s, lambda) box. `fixed` is s for lambda slices and lambda for s slices.
struct PathSegment {
  SegmentKind kind = SegmentKind::CustomLambdaSlice;
  double fixed = 1.0;
  double start = 0.0;
  double end = 0.0;
  int samples = 400;

  bool varies_lambda() const noexcept {
    return kind == SegmentKind::Gamma1 || kind == SegmentKind::Gamma3 ||
           kind == SegmentKind::CustomLambdaSlice;
  }
  double s_at(double t) const noexcept { return varies_lambda() ? fixed : t; }
  double lambda_at(double t) const noexcept { return varies_lambda() ? t : fixed; }

  /// s = s0, lambda from -lambda_inf up to 0.
  static PathSegment gamma1(double s0, double lambda_inf, int samples = 400);
  /// lambda = 0, s from s0 up to 1.
  static PathSegment gamma2(double s0, int samples = 400);
  /// s = 1, lambda from 0 down to -lambda_inf.
  static PathSegment gamma3(double lambda_inf, int samples = 400);
  /// lambda = -lambda_inf, s from 1 down to s0.
  static PathSegment gamma4(double s0, double lambda_inf, int samples = 400);
  static PathSegment lambda_slice(double s, double lambda_start, double lambda_end, int samples = 400);
  static PathSegment s_slice(double lambda, double s_start, double s_end, int samples = 400);
};

const char* segment_name(SegmentKind kind) noexcept;

struct CrossingEvent {
  double location = 0.0;
  int multiplicity = 1;
  int direction = 1;  // +1 counterclockwise, -1 clockwise
};

struct PhaseSample {
  double coordinate = 0.0;
  std::vector<double> phases;     // principal values in (-pi, pi], in track order
  std::vector<double> unwrapped;  // continuous along the path
  double unitarityDefect = 0.0;
  double lagrangianDefect = 0.0;  // relative to 1 + |X|^2 + |Z|^2
  std::optional<double> omegaLambdaMax;
};

struct PhasePath {
  std::vector<PhaseSample> samples;
  std::vector<CrossingEvent> crossings;
  int index = 0;
  double maxUnitarityDefect = 0.0;
  double maxLagrangianDefect = 0.0;
  double maxDetMismatch = 0.0;
};

/// Everything needed to evaluate W at a point of the (s, lambda) plane.
struct ShootingSystem {
  BoundaryPair left;
  Potential potential;
  TargetData target;
  int steps = 2000;
};

struct SpectralFlowOptions {
  std::optional<int> samples;
  double snapTolerance = 1e-8;
  double maxPhaseStep = 0.78539816339744831;  // pi / 4
  /// Bound on the summed movement of all phases over one step; below pi the winding is unambiguous.
  double maxTotalStep = 1.5707963267948966;  // pi / 2
  double minStep = 1e-9;
  double locateTolerance = 1e-8;
  double multiplicityTolerance = 1e-6;
  bool locate = true;
  bool recordOmegaLambda = false;
};

/// (X + iZ)(X - iZ)^{-1} factor, from the orthonormalized frame.
ComplexMatrix wtilde(const Frame& f, const ComplexMatrix& factor);

/// |W* W - I|
double unitarity_defect(const ComplexMatrix& w);

/// Principal arguments of the eigenvalues, ascending in (-pi, pi]. Throws NotUnitary.
std::vector<double> eigen_phases(const ComplexMatrix& w);

/// Distance on the unit circle between two angles.
double circular_distance(double a, double b) noexcept;

struct PhaseMatch {
  std::vector<std::size_t> permutation;  // next[permutation[j]] continues prev[j]
  double maxDistance = 0.0;
  double totalDistance = 0.0;
};

PhaseMatch match_phases(std::span<const double> prev, std::span<const double> next);

/// Signed count of phase passages through pi along the segment, with the path's phase data.
PhasePath spectral_flow(const PathSegment& segment, const ShootingSystem& system,
                        const SpectralFlowOptions& options = {});

std::vector<CrossingEvent> locate_crossings(const PathSegment& segment, const ShootingSystem& system,
                                            const SpectralFlowOptions& options = {});

struct BoxResult {
  std::array<int, 4> indices{};  // Gamma1..Gamma4
  std::array<PhasePath, 4> paths;
  int sum() const noexcept { return indices[0] + indices[1] + indices[2] + indices[3]; }
};

/// Maslov indices of the four sides of the box [s0, 1] x [-lambda_inf, 0].
/// Throws HomotopyCheckFailed if they do not sum to zero.
BoxResult maslov_box(const ShootingSystem& system, double s0, double lambda_inf,
                     const SpectralFlowOptions& options = {});

/// -2 A* gram A with A = (X - iZ)^{-1} factor.
ComplexMatrix omega_lambda(const Frame& f, const ComplexMatrix& factor);

/// 2 A* (X^t (V(s) - lambda) X - Z^t Z) A.
ComplexMatrix omega_s(const Frame& f, const ComplexMatrix& factor, const Potential& v, double lambda);

}  // namespace maslov
