#pragma once

#include <optional>
#include <vector>

#include "maslov/matrix.hpp"

namespace maslov {

/// Relative tolerances for the dense kernels. All are measured against norm_inf.
struct ToleranceSettings {
  double symmetry = 1e-9;
  double jacobi = 1e-12;
  int jacobi_max_sweeps = 100;
  double pivot = 1e-13;
  double orthonormal = 1e-10;
  double positive_definite = 1e-12;
  /// complex_eig gives up after qr_sweep_factor * rows^2 iterations.
  int qr_sweep_factor = 100;
};

struct SymEig {
  std::vector<double> eigenvalues;  // ascending
  RealMatrix eigenvectors;          // columns, orthonormal
};

SymEig sym_eig(const RealMatrix& s, const ToleranceSettings& tol = {});

/// Eigenvalues only, ascending.
std::vector<double> sym_eigenvalues(const RealMatrix& s, const ToleranceSettings& tol = {});

std::vector<Complex> complex_eig(const ComplexMatrix& c, const ToleranceSettings& tol = {});

/// Eigenvalues of a Hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h, const ToleranceSettings& tol = {});

/// Orthonormal basis of {v : |Mv| <= tol |M| |v|}. `reference_norm` replaces |M| when given.
RealMatrix nullspace_basis(const RealMatrix& m, double tol,
                           std::optional<double> reference_norm = std::nullopt);

RealMatrix ortho_projector(const RealMatrix& basis, const ToleranceSettings& tol = {});

RealMatrix solve(const RealMatrix& a, const RealMatrix& rhs, const ToleranceSettings& tol = {});
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& rhs,
                    const ToleranceSettings& tol = {});

RealMatrix inverse(const RealMatrix& a, const ToleranceSettings& tol = {});

RealMatrix sqrt_spd(const RealMatrix& s, const ToleranceSettings& tol = {});

/// Inverse square root of an SPD matrix.
RealMatrix inv_sqrt_spd(const RealMatrix& s, const ToleranceSettings& tol = {});

double determinant(const RealMatrix& a);
Complex determinant(const ComplexMatrix& a);

/// Singular values, descending.
std::vector<double> singular_values(const RealMatrix& m);

/// Moore-Penrose pseudo-inverse, discarding singular values below rel_tol * largest.
RealMatrix pseudo_inverse(const RealMatrix& m, double rel_tol = 1e-10);

/// Number of eigenvalues below -tol.
int count_negative(const std::vector<double>& eigenvalues, double tol);

}  // namespace maslov
