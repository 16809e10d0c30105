#include "maslov/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "maslov/boundary.hpp"
#include "maslov/errors.hpp"
#include "maslov/linalg.hpp"

namespace maslov::oracle {

std::size_t DiscretizedForm::dimension() const noexcept {
  if (meshSize <= 0) return 0;
  return leftBasis.cols() + rightBasis.cols() + static_cast<std::size_t>(meshSize - 1) * n;
}

namespace {

std::vector<std::size_t> block_offsets(const DiscretizedForm& f) {
  std::vector<std::size_t> off(f.stiffnessDiag.size() + 1, 0);
  for (std::size_t i = 0; i < f.stiffnessDiag.size(); ++i) off[i + 1] = off[i] + f.stiffnessDiag[i].rows();
  return off;
}

RealMatrix dense(const DiscretizedForm& f, const std::vector<RealMatrix>& diag,
                 const std::vector<RealMatrix>& sub) {
  const auto off = block_offsets(f);
  RealMatrix out(off.back(), off.back());
  for (std::size_t i = 0; i < diag.size(); ++i) out.set_block(off[i], off[i], diag[i]);
  for (std::size_t i = 1; i < diag.size(); ++i) {
    out.set_block(off[i], off[i - 1], sub[i - 1]);
    out.set_block(off[i - 1], off[i], sub[i - 1].transpose());
  }
  return out;
}

}  // namespace

RealMatrix DiscretizedForm::stiffness_dense() const { return dense(*this, stiffnessDiag, stiffnessSub); }
RealMatrix DiscretizedForm::mass_dense() const { return dense(*this, massDiag, massSub); }

DiscretizedForm assemble(const Problem& p, double s, int mesh) {
  if (mesh < 64) throw Error(ErrorCode::ValidationError, "mesh must have at least 64 elements");
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorCode::ValidationError, "s must lie in (0, 1]");
  const std::size_t n = p.n;
  const auto dec0 = bk_decompose(p.left);
  const auto dec1 = bk_decompose(p.right);
  const RealMatrix id = RealMatrix::identity(n);

  DiscretizedForm f;
  f.meshSize = mesh;
  f.n = n;
  f.s = s;
  f.leftBasis = nullspace_basis(dec0.pD, 1e-6, 1.0);
  f.rightBasis = nullspace_basis(dec1.pD, 1e-6, 1.0);

  const double h = 1.0 / mesh;
  std::vector<RealMatrix> kd(mesh + 1, RealMatrix(n, n)), ks(mesh, RealMatrix(n, n));
  std::vector<RealMatrix> md(mesh + 1, RealMatrix(n, n)), ms(mesh, RealMatrix(n, n));

  // Three-point Gauss rule on [0, 1].
  const double g = std::sqrt(0.6);
  const std::array<double, 3> nodes{0.5 * (1.0 - g), 0.5, 0.5 * (1.0 + g)};
  const std::array<double, 3> weights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

  for (int e = 0; e < mesh; ++e) {
    const double x0 = e * h;
    RealMatrix paa(n, n), pab(n, n), pbb(n, n);
    for (std::size_t q = 0; q < 3; ++q) {
      const double xi = nodes[q];
      const RealMatrix v = (s * s) * p.potential(s * (x0 + xi * h));
      const double w = weights[q] * h;
      paa += (w * (1.0 - xi) * (1.0 - xi)) * v;
      pab += (w * (1.0 - xi) * xi) * v;
      pbb += (w * xi * xi) * v;
    }
    kd[e] += (1.0 / h) * id + paa;
    kd[e + 1] += (1.0 / h) * id + pbb;
    ks[e] += (-1.0 / h) * id + pab;
    md[e] += (h / 3.0) * id;
    md[e + 1] += (h / 3.0) * id;
    ms[e] += (h / 6.0) * id;
  }
  kd[0] += s * dec0.robin();
  kd[mesh] -= s * dec1.robin();

  const RealMatrix& e0 = f.leftBasis;
  const RealMatrix& e1 = f.rightBasis;
  kd[0] = symmetrized(e0.transpose() * kd[0] * e0);
  md[0] = symmetrized(e0.transpose() * md[0] * e0);
  ks[0] = ks[0] * e0;
  ms[0] = ms[0] * e0;
  kd[mesh] = symmetrized(e1.transpose() * kd[mesh] * e1);
  md[mesh] = symmetrized(e1.transpose() * md[mesh] * e1);
  ks[mesh - 1] = e1.transpose() * ks[mesh - 1];
  ms[mesh - 1] = e1.transpose() * ms[mesh - 1];

  f.stiffnessDiag = std::move(kd);
  f.stiffnessSub = std::move(ks);
  f.massDiag = std::move(md);
  f.massSub = std::move(ms);
  return f;
}

namespace {

struct Inertia {
  int negative = 0;
  bool singular = false;
};

Inertia inertia(const DiscretizedForm& f, double mu) {
  Inertia out;
  const std::size_t blocks = f.stiffnessDiag.size();
  RealMatrix prev_inv;
  for (std::size_t i = 0; i < blocks; ++i) {
    RealMatrix d = f.stiffnessDiag[i] - mu * f.massDiag[i];
    if (i > 0) {
      const RealMatrix c = f.stiffnessSub[i - 1] - mu * f.massSub[i - 1];
      d -= c * prev_inv * c.transpose();
    }
    d = symmetrized(d);
    if (d.rows() == 0) {
      prev_inv = d;
      continue;
    }
    const SymEig eig = sym_eig(d);
    const double scale = std::max(norm_inf(d), 1.0);
    RealMatrix inv_diag(d.rows(), d.rows());
    for (std::size_t k = 0; k < d.rows(); ++k) {
      const double lam = eig.eigenvalues[k];
      if (std::abs(lam) <= 1e-13 * scale) {
        out.singular = true;
        return out;
      }
      if (lam < 0.0) ++out.negative;
      inv_diag(k, k) = 1.0 / lam;
    }
    prev_inv = eig.eigenvectors * inv_diag * eig.eigenvectors.transpose();
  }
  return out;
}

}  // namespace

int count_below(const DiscretizedForm& form, double mu) {
  const double unit = 1e-12 * std::max(1.0, std::abs(mu));
  double shift = 0.0;
  for (int attempt = 0; attempt < 30; ++attempt) {
    const Inertia in = inertia(form, mu + shift);
    if (!in.singular) return in.negative;
    shift = shift == 0.0 ? unit : 2.0 * shift;
  }
  throw Error(ErrorCode::Singular, "inertia factorization breaks down at mu = " + std::to_string(mu));
}

int negative_count(const DiscretizedForm& form, double tol) { return count_below(form, -tol); }

int mesh_stable_negative_count(const Problem& p, int mesh, double s, double tol) {
  const int coarse = negative_count(assemble(p, s, mesh), tol);
  const int fine = negative_count(assemble(p, s, 2 * mesh), tol);
  if (coarse != fine) {
    throw Error(ErrorCode::MeshSensitivity, "negative count " + std::to_string(coarse) + " at N = " +
                                                std::to_string(mesh) + " but " + std::to_string(fine) +
                                                " at N = " + std::to_string(2 * mesh));
  }
  return fine;
}

std::vector<double> lowest_eigenvalues(const DiscretizedForm& form, int k, double rel_tol) {
  std::vector<double> out;
  const int total = static_cast<int>(form.dimension());
  k = std::min(k, total);
  if (k <= 0) return out;
  double lo = -1.0;
  while (count_below(form, lo) > 0) lo *= 2.0;
  for (int j = 0; j < k; ++j) {
    double a = j == 0 ? lo : out.back() - 1e-9 * std::max(1.0, std::abs(out.back()));
    if (count_below(form, a) > j) a = lo;
    double b = std::max(1.0, std::abs(a));
    while (count_below(form, b) <= j) b *= 2.0;
    for (int it = 0; it < 200 && (b - a) > rel_tol * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
      const double mid = 0.5 * (a + b);
      if (count_below(form, mid) > j) {
        b = mid;
      } else {
        a = mid;
      }
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

std::vector<CurveRow> eigencurves(const Problem& p, std::span<const double> s_grid, int k, int mesh,
                                  Convention convention) {
  if (k < 1 || k > 8) throw Error(ErrorCode::ValidationError, "k must lie in 1..8");
  std::vector<CurveRow> rows;
  for (double s : s_grid) {
    CurveRow row{s, lowest_eigenvalues(assemble(p, s, mesh), k)};
    if (convention == Convention::Unscaled) {
      for (double& v : row.eigenvalues) v /= s * s;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace maslov::oracle
