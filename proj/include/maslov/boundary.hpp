#pragma once

#include <vector>

#include "maslov/matrix.hpp"

namespace maslov {

enum class Side { Left, Right };

/// One endpoint condition a1 y + a2 y' = 0.
struct BoundaryPair {
  RealMatrix a1;
  RealMatrix a2;
  Side side = Side::Left;

  std::size_t n() const noexcept { return a1.rows(); }
};

/// Checks rank [a1 a2] = n and a1 a2^t = a2 a1^t.
BoundaryPair validate_pair(const RealMatrix& a1, const RealMatrix& a2, Side side = Side::Left);

/// Rescales to a1 a1^t + a2 a2^t = I without changing the condition.
BoundaryPair normalize_pair(const BoundaryPair& p);

/// Dirichlet, Neumann and Robin projections with the Robin map on ran pR.
struct BKDecomposition {
  RealMatrix pD;
  RealMatrix pN;
  RealMatrix pR;
  RealMatrix lambda;

  /// pR * lambda * pR
  RealMatrix robin() const { return pR * lambda * pR; }
};

BKDecomposition bk_decompose(const BoundaryPair& p);

struct TargetData {
  RealMatrix frameX;
  RealMatrix frameZ;
  ComplexMatrix factor;
};

TargetData target_data(const BoundaryPair& p);

struct BottomShelfData {
  RealMatrix intersectionBasis;  // n x d
  RealMatrix bMatrix;            // d x d
  RealMatrix kernelBasis;        // d x d0, columns of ker B
  RealMatrix correction;         // d0 x d0
  bool nondegenerate = true;
  std::vector<double> bEigenvalues;
  std::vector<double> correctionEigenvalues;
  double kernelTolerance = 0.0;
  double degeneracyTolerance = 0.0;

  std::size_t dimension() const noexcept { return intersectionBasis.cols(); }
  /// Kernel of B mapped back into R^n.
  RealMatrix kernelInAmbient() const { return intersectionBasis * kernelBasis; }
};

BottomShelfData bottom_shelf(const BKDecomposition& dec0, const BKDecomposition& dec1,
                             const RealMatrix& v0);

/// Count of eigenvalues below -tol.
int morse_count(const RealMatrix& s, double tol);

}  // namespace maslov
