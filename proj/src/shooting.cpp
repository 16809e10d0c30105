#include "maslov/shooting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <string>
#include <tuple>
#include <unordered_map>

#include "maslov/errors.hpp"
#include "maslov/linalg.hpp"

namespace maslov {

struct Potential::Cache {
  std::mutex mutex;
  std::unordered_map<std::uint64_t, RealMatrix> values;
  std::size_t capacity = 0;
  std::vector<std::tuple<std::uint64_t, int, std::shared_ptr<const std::vector<double>>>> grids;
};

Potential::Potential(std::size_t n, Function f) : n_(n), f_(std::move(f)) {}

Potential Potential::constant(const RealMatrix& value) {
  return Potential(value.rows(), [value](double) { return value; });
}

RealMatrix Potential::operator()(double x) const {
  if (cache_) {
    const auto key = std::bit_cast<std::uint64_t>(x);
    {
      std::lock_guard lock(cache_->mutex);
      if (auto it = cache_->values.find(key); it != cache_->values.end()) return it->second;
    }
    RealMatrix v = f_(x);
    std::lock_guard lock(cache_->mutex);
    if (cache_->values.size() >= cache_->capacity) cache_->values.clear();
    cache_->values.emplace(key, v);
    return v;
  }
  RealMatrix v = f_(x);
  if (v.rows() != n_ || v.cols() != n_) {
    throw Error(ErrorCode::ValidationError, "potential returned a matrix of the wrong size");
  }
  const double asym = asymmetry(v);
  if (asym > 1e-9 * (1.0 + norm_inf(v))) {
    throw Error(ErrorCode::NotSymmetric,
                "V(" + std::to_string(x) + ") asymmetry " + std::to_string(asym));
  }
  return v;
}

double Potential::sup_norm(int grid) const {
  double best = 0.0;
  for (int k = 0; k <= grid; ++k) {
    best = std::max(best, norm_inf((*this)(static_cast<double>(k) / grid)));
  }
  return best;
}

void Potential::check_continuity(double lipschitz, int grid) const {
  const double dx = 1.0 / grid;
  RealMatrix prev = (*this)(0.0);
  for (int k = 1; k <= grid; ++k) {
    RealMatrix next = (*this)(k * dx);
    const double jump = norm_inf(next - prev);
    if (!std::isfinite(jump) || jump > lipschitz * dx) {
      throw Error(ErrorCode::ValidationError,
                  "potential jumps by " + std::to_string(jump) + " near x = " + std::to_string(k * dx));
    }
    prev = std::move(next);
  }
}

Potential Potential::shifted(double lambda0) const {
  Potential base = *this;
  const std::size_t n = n_;
  return Potential(n, [base, lambda0, n](double x) {
    return base(x) - lambda0 * RealMatrix::identity(n);
  });
}

Potential Potential::memoized(std::size_t capacity) const {
  Potential base = *this;
  base.cache_.reset();
  Potential out(n_, [base](double x) { return base(x); });
  out.cache_ = std::make_shared<Cache>();
  out.cache_->capacity = capacity;
  return out;
}

std::shared_ptr<const std::vector<double>> Potential::half_step_values(double s, int count) const {
  const auto key = std::bit_cast<std::uint64_t>(s);
  if (cache_) {
    std::lock_guard lock(cache_->mutex);
    for (const auto& [k, c, values] : cache_->grids)
      if (k == key && c == count) return values;
  }
  const std::size_t block = n_ * n_;
  auto values = std::make_shared<std::vector<double>>((2 * static_cast<std::size_t>(count) + 1) * block);
  const double h = s / (2.0 * count);
  for (int j = 0; j <= 2 * count; ++j) {
    const RealMatrix v = f_ ? (cache_ ? f_(j * h) : (*this)(j * h)) : RealMatrix(n_, n_);
    std::copy(v.data().begin(), v.data().end(), values->begin() + static_cast<std::ptrdiff_t>(j * block));
  }
  if (cache_) {
    std::lock_guard lock(cache_->mutex);
    if (cache_->grids.size() >= 8) cache_->grids.erase(cache_->grids.begin());
    cache_->grids.emplace_back(key, count, values);
  }
  return values;
}

RealMatrix system_matrix(double x, double lambda, const Potential& v) {
  const std::size_t n = v.n();
  RealMatrix a(2 * n, 2 * n);
  a.set_block(0, n, RealMatrix::identity(n));
  a.set_block(n, 0, v(x) - lambda * RealMatrix::identity(n));
  return a;
}

Frame initial_frame(const BoundaryPair& bc0, double lambda) {
  const std::size_t n = bc0.n();
  Frame f{0.0, lambda, bc0.a2.transpose(), -bc0.a1.transpose(), RealMatrix(n, n)};
  f.winding = std::arg(determinant(complexify(f.X, f.Z)));
  return f;
}

int effective_steps(double s, double lambda, int steps) {
  const double needed = std::ceil(50.0 * std::sqrt(std::abs(lambda)) * s);
  return std::max(steps, static_cast<int>(std::min(needed, 1e7)));
}

namespace {

constexpr double kRenormalizeAbove = 1e6;
constexpr double kRenormalizeBelow = 1e-6;
constexpr double kDefectBound = 1e-9;
constexpr double kMaxWindingStep = 1.5707963267948966;

/// Flat RK4 integrator state: X, Z and gram as row-major n x n blocks.
class Stepper {
 public:
  explicit Stepper(const Frame& f)
      : n_(f.X.rows()), nn_(n_ * n_), lambda_(f.lambda), s_(f.s), winding_(f.winding) {
    state_.resize(3 * nn_);
    std::copy(f.X.data().begin(), f.X.data().end(), state_.begin());
    std::copy(f.Z.data().begin(), f.Z.data().end(), state_.begin() + nn_);
    std::copy(f.gram.data().begin(), f.gram.data().end(), state_.begin() + 2 * nn_);
    work_.resize(14 * nn_);
    lu_.resize(nn_);
    det_ = det_plus();
  }

  /// One step of length h; q0, qm, q1 are V at s, s + h/2, s + h.
  void step(double h, const double* q0, const double* qm, const double* q1) {
    double* X = state_.data();
    double* Z = X + nn_;
    double* G = Z + nn_;
    double* k1z = work_.data();
    double* x2 = k1z + nn_;
    double* z2 = x2 + nn_;
    double* k2z = z2 + nn_;
    double* x3 = k2z + nn_;
    double* z3 = x3 + nn_;
    double* k3z = z3 + nn_;
    double* x4 = k3z + nn_;
    double* z4 = x4 + nn_;
    double* k4z = z4 + nn_;
    double* X1 = k4z + nn_;
    double* Z1 = X1 + nn_;
    double* xm = Z1 + nn_;

    apply(q0, X, k1z);
    for (std::size_t i = 0; i < nn_; ++i) {
      x2[i] = X[i] + 0.5 * h * Z[i];
      z2[i] = Z[i] + 0.5 * h * k1z[i];
    }
    apply(qm, x2, k2z);
    for (std::size_t i = 0; i < nn_; ++i) {
      x3[i] = X[i] + 0.5 * h * z2[i];
      z3[i] = Z[i] + 0.5 * h * k2z[i];
    }
    apply(qm, x3, k3z);
    for (std::size_t i = 0; i < nn_; ++i) {
      x4[i] = X[i] + h * z3[i];
      z4[i] = Z[i] + h * k3z[i];
    }
    apply(q1, x4, k4z);
    for (std::size_t i = 0; i < nn_; ++i) {
      X1[i] = X[i] + (h / 6.0) * (Z[i] + 2.0 * z2[i] + 2.0 * z3[i] + z4[i]);
      Z1[i] = Z[i] + (h / 6.0) * (k1z[i] + 2.0 * k2z[i] + 2.0 * k3z[i] + k4z[i]);
    }
    // Simpson with a cubic Hermite midpoint value.
    for (std::size_t i = 0; i < nn_; ++i) xm[i] = 0.5 * (X[i] + X1[i]) + (h / 8.0) * (Z[i] - Z1[i]);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = a; b < n_; ++b) {
        double s0 = 0.0, sm = 0.0, s1 = 0.0;
        for (std::size_t k = 0; k < n_; ++k) {
          s0 += X[k * n_ + a] * X[k * n_ + b];
          sm += xm[k * n_ + a] * xm[k * n_ + b];
          s1 += X1[k * n_ + a] * X1[k * n_ + b];
        }
        const double inc = (h / 6.0) * (s0 + 4.0 * sm + s1);
        G[a * n_ + b] += inc;
        if (a != b) G[b * n_ + a] += inc;
      }
    std::copy(X1, X1 + nn_, X);
    std::copy(Z1, Z1 + nn_, Z);
    s_ += h;
    renormalize_if_needed();
    const std::complex<double> det = det_plus();
    const double turn = std::arg(det / det_);
    winding_ = std::abs(turn) > kMaxWindingStep ? std::nan("") : winding_ + turn;
    det_ = det / std::abs(det);
  }

  Frame frame(double s) const {
    Frame f;
    f.s = s;
    f.lambda = lambda_;
    f.X = RealMatrix(n_, n_, std::vector<double>(state_.begin(), state_.begin() + nn_));
    f.Z = RealMatrix(n_, n_, std::vector<double>(state_.begin() + nn_, state_.begin() + 2 * nn_));
    f.gram = RealMatrix(n_, n_, std::vector<double>(state_.begin() + 2 * nn_, state_.end()));
    f.winding = winding_;
    return f;
  }

  double s() const noexcept { return s_; }
  void set_s(double s) noexcept { s_ = s; }

 private:
  /// out = (q - lambda I) x
  void apply(const double* q, const double* x, double* out) const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        double sum = -lambda_ * x[i * n_ + j];
        for (std::size_t k = 0; k < n_; ++k) sum += q[i * n_ + k] * x[k * n_ + j];
        out[i * n_ + j] = sum;
      }
  }

  /// det(X + iZ) by partial-pivot LU.
  std::complex<double> det_plus() {
    for (std::size_t i = 0; i < nn_; ++i) lu_[i] = {state_[i], state_[nn_ + i]};
    std::complex<double> det = 1.0;
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < n_; ++r)
        if (std::abs(lu_[r * n_ + c]) > std::abs(lu_[piv * n_ + c])) piv = r;
      if (piv != c) {
        for (std::size_t k = 0; k < n_; ++k) std::swap(lu_[c * n_ + k], lu_[piv * n_ + k]);
        det = -det;
      }
      const std::complex<double> d = lu_[c * n_ + c];
      det *= d;
      if (d == 0.0) return det;
      for (std::size_t r = c + 1; r < n_; ++r) {
        const std::complex<double> m = lu_[r * n_ + c] / d;
        for (std::size_t k = c; k < n_; ++k) lu_[r * n_ + k] -= m * lu_[c * n_ + k];
      }
    }
    return det;
  }

  void renormalize_if_needed() {
    double size = 0.0;
    for (std::size_t i = 0; i < 2 * nn_; ++i) size = std::max(size, std::abs(state_[i]));
    if (size < kRenormalizeAbove && size > kRenormalizeBelow) return;
    Frame f = frame(s_);
    const RealMatrix t = inv_sqrt_spd(f.X.transpose() * f.X + f.Z.transpose() * f.Z);
    f.X = f.X * t;
    f.Z = f.Z * t;
    f.gram = symmetrized(t * f.gram * t);
    std::copy(f.X.data().begin(), f.X.data().end(), state_.begin());
    std::copy(f.Z.data().begin(), f.Z.data().end(), state_.begin() + nn_);
    std::copy(f.gram.data().begin(), f.gram.data().end(), state_.begin() + 2 * nn_);
  }

  std::size_t n_;
  std::size_t nn_;
  double lambda_;
  double s_;
  double winding_;
  std::complex<double> det_;
  std::vector<double> state_;
  std::vector<double> work_;
  std::vector<std::complex<double>> lu_;
};

void check_defect(const Frame& f) {
  const double rel = relative_lagrangian_defect(f);
  if (rel > kDefectBound) {
    throw Error(ErrorCode::StepTooCoarse,
                "Lagrangian defect " + std::to_string(rel) + " at s = " + std::to_string(f.s));
  }
}

}  // namespace

Frame advance_frame(const Frame& start, const Potential& v, double s_target, double h_max) {
  const double length = s_target - start.s;
  if (length <= 0.0) return start;
  const long count = std::max(1L, static_cast<long>(std::ceil(length / h_max - 1e-9)));
  const double h = length / static_cast<double>(count);
  Stepper stepper(start);
  RealMatrix q0 = v(start.s);
  for (long k = 0; k < count; ++k) {
    const double x0 = start.s + static_cast<double>(k) * h;
    const RealMatrix qm = v(x0 + 0.5 * h);
    RealMatrix q1 = v(k + 1 == count ? s_target : x0 + h);
    stepper.step(h, q0.data().data(), qm.data().data(), q1.data().data());
    q0 = std::move(q1);
  }
  Frame f = stepper.frame(s_target);
  check_defect(f);
  return f;
}

Frame integrate_frame(const BoundaryPair& bc0, const Potential& v, double lambda, double s,
                      int steps) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw Error(ErrorCode::ValidationError, "s must lie in (0, 1]");
  }
  if (steps < 16) throw Error(ErrorCode::ValidationError, "steps must be at least 16");
  const int count = effective_steps(s, lambda, steps);
  const auto grid = v.half_step_values(s, count);
  const std::size_t block = v.n() * v.n();
  const double* values = grid->data();
  Stepper stepper(initial_frame(bc0, lambda));
  const double h = s / count;
  for (int k = 0; k < count; ++k) {
    const std::size_t j = 2 * static_cast<std::size_t>(k);
    stepper.step(h, values + j * block, values + (j + 1) * block, values + (j + 2) * block);
  }
  Frame f = stepper.frame(s);
  check_defect(f);
  return f;
}

double lagrangian_defect(const Frame& f) {
  return norm_inf(f.X.transpose() * f.Z - f.Z.transpose() * f.X);
}

double relative_lagrangian_defect(const Frame& f) {
  const double x = norm_inf(f.X);
  const double z = norm_inf(f.Z);
  return lagrangian_defect(f) / (1.0 + x * x + z * z);
}

int dirichlet_kernel_count(const BoundaryPair& bc0, const Potential& v,
                           std::span<const double> s_grid, int steps) {
  int total = 0;
  for (const auto& c : dirichlet_kernel_crossings(bc0, v, s_grid, steps)) total += c.multiplicity;
  return total;
}

}  // namespace maslov
