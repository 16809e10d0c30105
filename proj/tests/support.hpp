#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "maslov/linalg.hpp"
#include "maslov/matrix.hpp"
#include "maslov/problem.hpp"

namespace maslov::testing {

inline RealMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  RealMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = g(rng);
  return m;
}

inline RealMatrix random_symmetric(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  return symmetrized(random_matrix(rng, n, n, scale));
}

inline RealMatrix random_orthogonal(std::mt19937_64& rng, std::size_t n) {
  return sym_eig(random_symmetric(rng, n)).eigenvectors;
}

/// a1 = G (P_D - Lambda), a2 = G (P_N + P_R) for random orthogonal splitting, Robin map and G.
inline std::pair<RealMatrix, RealMatrix> random_bc(std::mt19937_64& rng, std::size_t n) {
  const RealMatrix q = random_orthogonal(rng, n);
  std::uniform_int_distribution<int> kind(0, 2);
  RealMatrix pD(n, n), pN(n, n), pR(n, n);
  std::vector<std::size_t> robin;
  for (std::size_t k = 0; k < n; ++k) {
    const RealMatrix v = q.column(k);
    const RealMatrix outer = v * v.transpose();
    switch (kind(rng)) {
      case 0: pD += outer; break;
      case 1: pN += outer; break;
      default: pR += outer; robin.push_back(k);
    }
  }
  RealMatrix lambda(n, n);
  if (!robin.empty()) lambda = pR * random_symmetric(rng, n, 1.5) * pR;
  RealMatrix g = random_matrix(rng, n, n);
  while (std::abs(determinant(g)) < 0.2) g = random_matrix(rng, n, n);
  return {g * (pD - lambda), g * (pN + pR)};
}

/// Symmetric trigonometric polynomial scaled to a sup norm in [5, 30].
inline Potential random_potential(std::mt19937_64& rng, std::size_t n) {
  constexpr int kModes = 3;
  std::vector<RealMatrix> a, b;
  for (int k = 0; k <= kModes; ++k) {
    a.push_back(random_symmetric(rng, n, 1.0 / (1 + k)));
    b.push_back(random_symmetric(rng, n, 1.0 / (1 + k)));
  }
  auto raw = [a, b](double x) {
    RealMatrix v = a[0];
    for (std::size_t k = 1; k < a.size(); ++k) {
      const double w = 3.14159265358979323846 * static_cast<double>(k) * x;
      v += std::cos(w) * a[k] + std::sin(w) * b[k];
    }
    return v;
  };
  const double sup = Potential(n, raw).sup_norm(1024);
  std::uniform_real_distribution<double> target(5.0, 30.0);
  const double scale = target(rng) / sup * (1.0 - 1e-9);
  return Potential(n, [raw, scale](double x) { return scale * raw(x); });
}

inline Problem random_problem(std::mt19937_64& rng, std::size_t n, NumericSettings settings = {}) {
  const auto [a1, a2] = random_bc(rng, n);
  const auto [b1, b2] = random_bc(rng, n);
  return make_problem(random_potential(rng, n), a1, a2, b1, b2, settings);
}

inline Potential constant_potential(double v) { return Potential::constant(RealMatrix{{v}}); }

inline Problem scalar_dirichlet(double v, NumericSettings settings = {}) {
  const RealMatrix one{{1.0}}, zero{{0.0}};
  return make_problem(constant_potential(v), one, zero, one, zero, settings);
}

}  // namespace maslov::testing
