#include "maslov/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maslov/errors.hpp"
#include "maslov/linalg.hpp"

namespace maslov {

namespace {

constexpr double kSelfAdjointTol = 1e-9;
constexpr double kRankTol = 1e-10;
constexpr double kProjectorTol = 1e-9;
constexpr double kKernelTol = 1e-8;
// Kernels found through M^t M are resolved only to about sqrt(eps) |M|.
constexpr double kSubspaceTol = 1e-6;
constexpr double kImagTol = 1e-8;
constexpr double kCrossCheckTol = 1e-7;

void check_shape(const RealMatrix& m, std::size_t n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::ValidationError, std::string(what) + " must be " + std::to_string(n) +
                                                " x " + std::to_string(n));
  }
}

/// Orthonormal basis of the range of a projector.
RealMatrix range_basis(const RealMatrix& projector) {
  const std::size_t n = projector.rows();
  return nullspace_basis(RealMatrix::identity(n) - projector, kSubspaceTol, 1.0);
}

}  // namespace

BoundaryPair validate_pair(const RealMatrix& a1, const RealMatrix& a2, Side side) {
  const std::size_t n = a1.rows();
  if (n == 0) throw Error(ErrorCode::ValidationError, "boundary matrices are empty");
  check_shape(a1, n, "a1");
  check_shape(a2, n, "a2");
  const RealMatrix gram = a1 * a1.transpose() + a2 * a2.transpose();
  const auto eig = sym_eigenvalues(gram);
  if (eig.front() <= kRankTol * std::max(eig.back(), 0.0)) {
    throw Error(ErrorCode::RankDeficient, "rank [a1 a2] < " + std::to_string(n));
  }
  const double defect = norm_inf(a1 * a2.transpose() - a2 * a1.transpose());
  const double scale = std::max(1.0, norm_inf(a1) * norm_inf(a2));
  if (defect > kSelfAdjointTol * scale) {
    throw Error(ErrorCode::NotSelfAdjoint, "|a1 a2^t - a2 a1^t| = " + std::to_string(defect));
  }
  return {a1, a2, side};
}

BoundaryPair normalize_pair(const BoundaryPair& p) {
  const RealMatrix gram = p.a1 * p.a1.transpose() + p.a2 * p.a2.transpose();
  const RealMatrix m = inv_sqrt_spd(gram);
  return {m * p.a1, m * p.a2, p.side};
}

BKDecomposition bk_decompose(const BoundaryPair& p) {
  const std::size_t n = p.n();
  const RealMatrix id = RealMatrix::identity(n);
  BKDecomposition d;
  d.pD = ortho_projector(nullspace_basis(p.a2, kSubspaceTol, 1.0));
  d.pN = ortho_projector(nullspace_basis(p.a1, kSubspaceTol, 1.0));
  d.pR = id - d.pD - d.pN;
  const double cross = std::max({norm_inf(d.pR * d.pD), norm_inf(d.pR * d.pN), norm_inf(d.pD * d.pN)});
  const double idem = norm_inf(d.pR * d.pR - d.pR);
  if (cross > kProjectorTol || idem > kProjectorTol) {
    throw Error(ErrorCode::DecompositionInconsistent,
                "projections not mutually orthogonal (" + std::to_string(std::max(cross, idem)) + ")");
  }
  d.lambda = RealMatrix(n, n);
  const RealMatrix r = range_basis(d.pR);
  if (r.cols() == 0) return d;

  const Complex i(0.0, 1.0);
  const ComplexMatrix a1 = complexify(p.a1);
  const ComplexMatrix a2 = complexify(p.a2);
  const ComplexMatrix u = -solve(a1 - i * a2, a1 + i * a2);
  const ComplexMatrix rc = complexify(r);
  const ComplexMatrix ur = rc.adjoint() * u * rc;
  const ComplexMatrix idr = ComplexMatrix::identity(r.cols());
  const ComplexMatrix lam_c = (-i) * solve(ur + idr, ur - idr);
  const double imag = max_abs(imag_part(lam_c));
  if (imag > kImagTol) {
    throw Error(ErrorCode::DecompositionInconsistent,
                "Robin map has imaginary part " + std::to_string(imag));
  }
  const RealMatrix lam_r = symmetrized(real_part(lam_c));
  const RealMatrix direct = -(pseudo_inverse(p.a2 * r) * (p.a1 * r));
  const double mismatch = norm_inf(lam_r - direct);
  if (mismatch > kCrossCheckTol * (1.0 + norm_inf(lam_r))) {
    throw Error(ErrorCode::DecompositionInconsistent,
                "Cayley and direct Robin maps differ by " + std::to_string(mismatch));
  }
  d.lambda = symmetrized(r * lam_r * r.transpose());
  return d;
}

TargetData target_data(const BoundaryPair& p) {
  const RealMatrix& b1 = p.a1;
  const RealMatrix& b2 = p.a2;
  TargetData t;
  t.frameX = b2.transpose();
  t.frameZ = -b1.transpose();
  t.factor = complexify(b1.transpose() * b1 - b2.transpose() * b2, -2.0 * (b2.transpose() * b1));
  return t;
}

BottomShelfData bottom_shelf(const BKDecomposition& dec0, const BKDecomposition& dec1,
                             const RealMatrix& v0) {
  const std::size_t n = dec0.pD.rows();
  check_shape(v0, n, "V(0)");
  BottomShelfData out;
  const RealMatrix robin0 = dec0.robin();
  const RealMatrix robin1 = dec1.robin();
  out.kernelTolerance = kKernelTol * (1.0 + norm_inf(robin0) + norm_inf(robin1));
  out.intersectionBasis = nullspace_basis(dec0.pD + dec1.pD, kSubspaceTol, 1.0);
  const RealMatrix& k = out.intersectionBasis;
  const std::size_t dim = k.cols();
  if (dim == 0) {
    out.bMatrix = RealMatrix(0, 0);
    out.kernelBasis = RealMatrix(0, 0);
    out.correction = RealMatrix(0, 0);
    return out;
  }
  out.bMatrix = symmetrized(k.transpose() * (robin0 - robin1) * k);
  const SymEig beig = sym_eig(out.bMatrix);
  out.bEigenvalues = beig.eigenvalues;
  std::vector<std::size_t> kernel;
  for (std::size_t j = 0; j < dim; ++j)
    if (std::abs(beig.eigenvalues[j]) <= out.kernelTolerance) kernel.push_back(j);
  out.kernelBasis = RealMatrix(dim, kernel.size());
  for (std::size_t c = 0; c < kernel.size(); ++c)
    for (std::size_t i = 0; i < dim; ++i) out.kernelBasis(i, c) = beig.eigenvectors(i, kernel[c]);
  const RealMatrix kl = k * out.kernelBasis;
  out.correction = symmetrized(kl.transpose() * (symmetrized(v0) - robin0 * robin0) * kl);
  out.correctionEigenvalues = sym_eigenvalues(out.correction);
  out.degeneracyTolerance = 1e-6 * (1.0 + norm_inf(out.correction));
  for (double mu : out.correctionEigenvalues)
    if (std::abs(mu) <= out.degeneracyTolerance) out.nondegenerate = false;
  return out;
}

int morse_count(const RealMatrix& s, double tol) {
  if (s.rows() == 0) return 0;
  return count_negative(sym_eigenvalues(s), tol);
}

}  // namespace maslov
