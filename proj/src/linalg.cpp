#include "maslov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "maslov/errors.hpp"

namespace maslov {

namespace {

void require_square(std::size_t rows, std::size_t cols, const char* what) {
  if (rows != cols) {
    throw Error(ErrorCode::ValidationError, std::string(what) + ": matrix must be square");
  }
}

double off_diagonal_norm(const RealMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

template <typename T>
struct LU {
  Matrix<T> lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;
};

template <typename T>
LU<T> lu_factor(const Matrix<T>& a, double pivot_floor) {
  const std::size_t n = a.rows();
  LU<T> f{a, std::vector<std::size_t>(n), 1, false};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  auto& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(m(i, k)) > best) {
        best = std::abs(m(i, k));
        p = i;
      }
    }
    if (best <= pivot_floor) {
      f.singular = true;
      if (best == 0.0) continue;
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      std::swap(f.perm[k], f.perm[p]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const T factor = m(i, k) / m(k, k);
      m(i, k) = factor;
      if (factor == T{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= factor * m(k, j);
    }
  }
  return f;
}

template <typename T>
Matrix<T> solve_impl(const Matrix<T>& a, const Matrix<T>& rhs, const ToleranceSettings& tol) {
  require_square(a.rows(), a.cols(), "solve");
  if (rhs.rows() != a.rows()) {
    throw Error(ErrorCode::ValidationError, "solve: right-hand side has wrong row count");
  }
  const std::size_t n = a.rows();
  const double floor = tol.pivot * norm_inf(a);
  auto f = lu_factor(a, floor);
  if (f.singular || (n > 0 && norm_inf(a) == 0.0)) {
    throw Error(ErrorCode::Singular, "pivot below " + std::to_string(floor));
  }
  Matrix<T> x(n, rhs.cols());
  for (std::size_t c = 0; c < rhs.cols(); ++c) {
    std::vector<T> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      T sum = rhs(f.perm[i], c);
      for (std::size_t j = 0; j < i; ++j) sum -= f.lu(i, j) * y[j];
      y[i] = sum;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      T sum = y[ii];
      for (std::size_t j = ii + 1; j < n; ++j) sum -= f.lu(ii, j) * x(j, c);
      x(ii, c) = sum / f.lu(ii, ii);
    }
  }
  return x;
}

template <typename T>
T determinant_impl(const Matrix<T>& a) {
  require_square(a.rows(), a.cols(), "determinant");
  auto f = lu_factor(a, 0.0);
  T det = static_cast<T>(f.sign);
  for (std::size_t i = 0; i < a.rows(); ++i) det *= f.lu(i, i);
  return det;
}

/// Householder reduction to upper Hessenberg form.
ComplexMatrix hessenberg(ComplexMatrix h) {
  const std::size_t n = h.rows();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha_norm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha_norm += std::norm(h(i, k));
    alpha_norm = std::sqrt(alpha_norm);
    if (alpha_norm == 0.0) continue;
    std::vector<Complex> v(n - k - 1);
    for (std::size_t i = k + 1; i < n; ++i) v[i - k - 1] = h(i, k);
    const Complex x0 = v[0];
    const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
    v[0] += phase * alpha_norm;
    double vnorm2 = 0.0;
    for (const auto& z : v) vnorm2 += std::norm(z);
    if (vnorm2 == 0.0) continue;
    // H <- (I - 2 v v*/|v|^2) H (I - 2 v v*/|v|^2)
    for (std::size_t j = 0; j < n; ++j) {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) dot += std::conj(v[i]) * h(k + 1 + i, j);
      dot *= 2.0 / vnorm2;
      for (std::size_t i = 0; i < v.size(); ++i) h(k + 1 + i, j) -= v[i] * dot;
    }
    for (std::size_t i = 0; i < n; ++i) {
      Complex dot = 0.0;
      for (std::size_t j = 0; j < v.size(); ++j) dot += h(i, k + 1 + j) * v[j];
      dot *= 2.0 / vnorm2;
      for (std::size_t j = 0; j < v.size(); ++j) h(i, k + 1 + j) -= dot * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
  return h;
}

struct Givens {
  Complex c;
  Complex s;
};

Givens make_givens(Complex x, Complex y) {
  const double r = std::hypot(std::abs(x), std::abs(y));
  if (r == 0.0) return {Complex(1.0), Complex(0.0)};
  return {x / r, y / r};
}

}  // namespace

SymEig sym_eig(const RealMatrix& s, const ToleranceSettings& tol) {
  require_square(s.rows(), s.cols(), "sym_eig");
  const std::size_t n = s.rows();
  const double scale = norm_inf(s);
  const double asym = asymmetry(s);
  if (asym > tol.symmetry * scale) {
    throw Error(ErrorCode::NotSymmetric, "asymmetry " + std::to_string(asym));
  }
  RealMatrix a = symmetrized(s);
  RealMatrix v = RealMatrix::identity(n);
  const double target = tol.jacobi * scale;
  int sweep = 0;
  while (off_diagonal_norm(a) > target) {
    if (++sweep > tol.jacobi_max_sweeps) {
      throw Error(ErrorCode::NoConvergence, "Jacobi sweeps exhausted");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymEig out{std::vector<double>(n), RealMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> sym_eigenvalues(const RealMatrix& s, const ToleranceSettings& tol) {
  return sym_eig(s, tol).eigenvalues;
}

std::vector<Complex> complex_eig(const ComplexMatrix& c, const ToleranceSettings& tol) {
  require_square(c.rows(), c.cols(), "complex_eig");
  const std::size_t n = c.rows();
  std::vector<Complex> eig;
  eig.reserve(n);
  if (n == 0) return eig;
  ComplexMatrix h = hessenberg(c);
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(norm_inf(c), std::numeric_limits<double>::min());
  const long max_iter = static_cast<long>(tol.qr_sweep_factor) * static_cast<long>(n * n);
  long total = 0;
  int since_deflation = 0;
  std::size_t hi = n - 1;
  while (true) {
    if (hi == 0) {
      eig.push_back(h(0, 0));
      break;
    }
    std::size_t lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      double ref = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
      if (ref == 0.0) ref = scale;
      if (sub <= eps * ref) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig.push_back(h(hi, hi));
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++total > max_iter) {
      throw Error(ErrorCode::NoConvergence, "complex QR iteration limit reached");
    }
    ++since_deflation;
    Complex mu;
    if (since_deflation % 11 == 0) {
      mu = h(hi, hi) + Complex(std::abs(h(hi, hi - 1)), 0.5 * std::abs(h(hi, hi - 1)));
    } else {
      const Complex a = h(hi - 1, hi - 1);
      const Complex b = h(hi - 1, hi);
      const Complex cc = h(hi, hi - 1);
      const Complex d = h(hi, hi);
      const Complex half = 0.5 * (a - d);
      const Complex disc = std::sqrt(half * half + b * cc);
      const Complex m1 = 0.5 * (a + d) + disc;
      const Complex m2 = 0.5 * (a + d) - disc;
      mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
    }
    for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= mu;
    std::vector<Givens> rot;
    rot.reserve(hi - lo);
    for (std::size_t k = lo; k < hi; ++k) {
      const Givens g = make_givens(h(k, k), h(k + 1, k));
      rot.push_back(g);
      for (std::size_t j = k; j <= hi; ++j) {
        const Complex x = h(k, j);
        const Complex y = h(k + 1, j);
        h(k, j) = std::conj(g.c) * x + std::conj(g.s) * y;
        h(k + 1, j) = -g.s * x + g.c * y;
      }
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const Givens& g = rot[k - lo];
      const std::size_t last = std::min(k + 2, hi);
      for (std::size_t i = lo; i <= last; ++i) {
        const Complex x = h(i, k);
        const Complex y = h(i, k + 1);
        h(i, k) = x * g.c + y * g.s;
        h(i, k + 1) = -x * std::conj(g.s) + y * std::conj(g.c);
      }
    }
    for (std::size_t i = lo; i <= hi; ++i) h(i, i) += mu;
  }
  return eig;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h, const ToleranceSettings& tol) {
  require_square(h.rows(), h.cols(), "hermitian_eigenvalues");
  const std::size_t n = h.rows();
  RealMatrix embed(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = 0.5 * (h(i, j).real() + h(j, i).real());
      const double im = 0.5 * (h(i, j).imag() - h(j, i).imag());
      embed(i, j) = re;
      embed(i + n, j + n) = re;
      embed(i, j + n) = -im;
      embed(i + n, j) = im;
    }
  const auto doubled = sym_eigenvalues(embed, tol);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = 0.5 * (doubled[2 * k] + doubled[2 * k + 1]);
  return out;
}

RealMatrix nullspace_basis(const RealMatrix& m, double tol, std::optional<double> reference_norm) {
  const std::size_t n = m.cols();
  const RealMatrix gram = m.transpose() * m;
  const auto eig = sym_eig(gram);
  const double ref2 = reference_norm ? (*reference_norm) * (*reference_norm) : norm_inf(gram);
  const double threshold = tol * tol * ref2;
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < n; ++k)
    if (eig.eigenvalues[k] <= threshold) keep.push_back(k);
  RealMatrix basis(n, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) basis(i, c) = eig.eigenvectors(i, keep[c]);
  return basis;
}

RealMatrix ortho_projector(const RealMatrix& basis, const ToleranceSettings& tol) {
  const RealMatrix g = basis.transpose() * basis;
  const double defect = norm_inf(g - RealMatrix::identity(basis.cols()));
  if (defect > tol.orthonormal) {
    throw Error(ErrorCode::NotOrthonormal, "basis defect " + std::to_string(defect));
  }
  return basis * basis.transpose();
}

RealMatrix solve(const RealMatrix& a, const RealMatrix& rhs, const ToleranceSettings& tol) {
  return solve_impl(a, rhs, tol);
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& rhs, const ToleranceSettings& tol) {
  return solve_impl(a, rhs, tol);
}

RealMatrix inverse(const RealMatrix& a, const ToleranceSettings& tol) {
  return solve(a, RealMatrix::identity(a.rows()), tol);
}

namespace {

RealMatrix spectral_power(const RealMatrix& s, double power, const ToleranceSettings& tol) {
  const auto eig = sym_eig(s, tol);
  const double floor = tol.positive_definite * norm_inf(s);
  const std::size_t n = s.rows();
  for (double lam : eig.eigenvalues) {
    if (lam <= floor) {
      throw Error(ErrorCode::NotPositiveDefinite, "eigenvalue " + std::to_string(lam));
    }
  }
  RealMatrix d(n, n);
  for (std::size_t k = 0; k < n; ++k) d(k, k) = std::pow(eig.eigenvalues[k], power);
  return symmetrized(eig.eigenvectors * d * eig.eigenvectors.transpose());
}

}  // namespace

RealMatrix sqrt_spd(const RealMatrix& s, const ToleranceSettings& tol) {
  return spectral_power(s, 0.5, tol);
}

RealMatrix inv_sqrt_spd(const RealMatrix& s, const ToleranceSettings& tol) {
  return spectral_power(s, -0.5, tol);
}

double determinant(const RealMatrix& a) { return determinant_impl(a); }
Complex determinant(const ComplexMatrix& a) { return determinant_impl(a); }

std::vector<double> singular_values(const RealMatrix& m) {
  // One-sided Jacobi on the columns of m (or of m^t when wide).
  RealMatrix u = m.rows() >= m.cols() ? m : m.transpose();
  const std::size_t rows = u.rows();
  const std::size_t cols = u.cols();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double up = u(i, p);
          const double uq = u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rows; ++i) sum += u(i, j) * u(i, j);
    sv[j] = std::sqrt(sum);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

RealMatrix pseudo_inverse(const RealMatrix& m, double rel_tol) {
  const RealMatrix g = m.transpose() * m;
  const auto eig = sym_eig(g);
  const std::size_t n = g.rows();
  const double top = eig.eigenvalues.empty() ? 0.0 : std::max(0.0, eig.eigenvalues.back());
  RealMatrix d(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (eig.eigenvalues[k] > rel_tol * rel_tol * top && eig.eigenvalues[k] > 0.0) {
      d(k, k) = 1.0 / eig.eigenvalues[k];
    }
  }
  return eig.eigenvectors * d * eig.eigenvectors.transpose() * m.transpose();
}

int count_negative(const std::vector<double>& eigenvalues, double tol) {
  return static_cast<int>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                        [tol](double v) { return v < -tol; }));
}

}  // namespace maslov
