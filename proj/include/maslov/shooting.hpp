#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "maslov/boundary.hpp"
#include "maslov/matrix.hpp"

namespace maslov {

/// A continuous symmetric matrix potential V(x) on [0,1].
/// Evaluation is reentrant; copies share any memo cache.
class Potential {
 public:
  using Function = std::function<RealMatrix(double)>;

  Potential() = default;
  Potential(std::size_t n, Function f);

  static Potential constant(const RealMatrix& value);

  std::size_t n() const noexcept { return n_; }

  /// Evaluates and checks |V - V^t| <= 1e-9 (1 + |V|). Throws NotSymmetric.
  RealMatrix operator()(double x) const;

  /// max over a uniform grid of |V(x)| in the max-row-sum norm.
  double sup_norm(int grid = 1024) const;

  /// Throws ValidationError when |V(x_k+1) - V(x_k)| exceeds lipschitz * dx on the grid.
  void check_continuity(double lipschitz, int grid = 1024) const;

  /// V - lambda0 I.
  Potential shifted(double lambda0) const;

  /// A copy whose evaluations are cached (thread-safe, bounded).
  Potential memoized(std::size_t capacity = 1 << 16) const;

  /// V at x = j s / (2 count) for j = 0..2 count, as consecutive row-major n x n blocks.
  /// Memoized potentials keep the most recent grids.
  std::shared_ptr<const std::vector<double>> half_step_values(double s, int count) const;

 private:
  struct Cache;
  std::size_t n_ = 0;
  Function f_;
  std::shared_ptr<Cache> cache_;
};

/// Lagrangian frame (X, Z) at (s, lambda) with gram = int_0^s X^t X.
/// Frames may be rescaled on the right by a matrix of positive determinant; every derived
/// quantity is invariant under that.
struct Frame {
  double s = 0.0;
  double lambda = 0.0;
  RealMatrix X;
  RealMatrix Z;
  RealMatrix gram;
  /// arg det(X + iZ), continued along [0, s] from its principal value at s = 0.
  /// NaN when a single integration step turned it by more than pi / 2.
  double winding = 0.0;
};

/// [[0, I], [V(x) - lambda I, 0]]
RealMatrix system_matrix(double x, double lambda, const Potential& v);

/// Initial frame (a2^t, -a1^t) at s = 0.
Frame initial_frame(const BoundaryPair& bc0, double lambda);

/// Number of RK4 steps actually used for an integration over [0, s].
int effective_steps(double s, double lambda, int steps);

/// RK4 from x = 0 to x = s with `steps` (or more for large |lambda|) uniform steps.
/// Throws StepTooCoarse when the Lagrangian defect exceeds its bound.
Frame integrate_frame(const BoundaryPair& bc0, const Potential& v, double lambda, double s,
                      int steps);

/// Continues `start` to s_target (> start.s) with step at most h_max.
Frame advance_frame(const Frame& start, const Potential& v, double s_target, double h_max);

/// |X^t Z - Z^t X| in the max-row-sum norm.
double lagrangian_defect(const Frame& f);

/// Defect relative to 1 + |X|^2 + |Z|^2.
double relative_lagrangian_defect(const Frame& f);

struct DirichletCrossing {
  double s = 0.0;
  int multiplicity = 0;
};

/// Points of [s_grid.front(), s_grid.back()] where X(s, 0) is singular, refined to width 1e-8.
/// The grid size sets the initial sampling, which is refined adaptively.
std::vector<DirichletCrossing> dirichlet_kernel_crossings(const BoundaryPair& bc0,
                                                          const Potential& v,
                                                          std::span<const double> s_grid,
                                                          int steps = 2000);

/// Sum of dim ker X(s, 0) over the grid interval.
int dirichlet_kernel_count(const BoundaryPair& bc0, const Potential& v,
                           std::span<const double> s_grid, int steps = 2000);

}  // namespace maslov
