#pragma once

#include <span>
#include <vector>

#include "maslov/matrix.hpp"
#include "maslov/problem.hpp"

namespace maslov::oracle {

/// P1 Galerkin discretization of the form of H(s) on a uniform mesh with N elements.
/// K and M are block tridiagonal; the end blocks live in the bases of ker P_D.
struct DiscretizedForm {
  int meshSize = 0;
  std::size_t n = 0;
  double s = 1.0;
  std::vector<RealMatrix> stiffnessDiag;  // N + 1 blocks
  std::vector<RealMatrix> stiffnessSub;   // block (i, i-1), i = 1..N
  std::vector<RealMatrix> massDiag;
  std::vector<RealMatrix> massSub;
  RealMatrix leftBasis;   // n x m0, ker P_D0
  RealMatrix rightBasis;  // n x m1, ker P_D1

  std::size_t dimension() const noexcept;
  /// Dense K (only for small meshes).
  RealMatrix stiffness_dense() const;
  RealMatrix mass_dense() const;
};

/// Form of H(s): |u'|^2 + s^2 <V(s x) u, u> + s (R0 u(0), u(0)) - s (R1 u(1), u(1)), P_Di u(i) = 0.
DiscretizedForm assemble(const Problem& p, double s, int mesh);

/// Number of generalized eigenvalues below mu (Sylvester inertia of K - mu M).
int count_below(const DiscretizedForm& form, double mu);

/// Number of eigenvalues below -tol.
int negative_count(const DiscretizedForm& form, double tol = 1e-8);

/// negative_count at N and 2N; throws MeshSensitivity when they differ.
int mesh_stable_negative_count(const Problem& p, int mesh, double s = 1.0, double tol = 1e-8);

/// The k lowest eigenvalues, ascending, by bisection on count_below.
std::vector<double> lowest_eigenvalues(const DiscretizedForm& form, int k, double rel_tol = 1e-12);

enum class Convention { Scaled, Unscaled };

struct CurveRow {
  double s = 0.0;
  std::vector<double> eigenvalues;
};

/// k lowest eigenvalues of H(s) per grid point; Unscaled divides by s^2 (eigenvalues of H_s).
std::vector<CurveRow> eigencurves(const Problem& p, std::span<const double> s_grid, int k, int mesh,
                                  Convention convention = Convention::Scaled);

}  // namespace maslov::oracle
