#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "maslov/errors.hpp"
#include "maslov/linalg.hpp"
#include "support.hpp"

using namespace maslov;
using maslov::testing::random_matrix;
using maslov::testing::random_symmetric;

namespace {

std::vector<Complex> sorted_by_arg(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return std::arg(a) != std::arg(b) ? std::arg(a) < std::arg(b) : std::abs(a) < std::abs(b);
  });
  return v;
}

}  // namespace

TEST_SUITE("matrix_kernels") {

TEST_CASE("sym_eig small cases") {
  auto e = sym_eigenvalues(RealMatrix::identity(2));
  CHECK(e[0] == doctest::Approx(1.0));
  CHECK(e[1] == doctest::Approx(1.0));
  e = sym_eigenvalues(RealMatrix{{-11, 0}, {0, -6}});
  CHECK(e[0] == doctest::Approx(-11.0));
  CHECK(e[1] == doctest::Approx(-6.0));
  e = sym_eigenvalues(RealMatrix{{0, 1}, {1, 0}});
  CHECK(e[0] == doctest::Approx(-1.0));
  CHECK(e[1] == doctest::Approx(1.0));
}

TEST_CASE("sym_eig rejects asymmetric input") {
  CHECK_THROWS_AS(sym_eig(RealMatrix{{0, 1}, {0, 0}}), Error);
}

TEST_CASE("sym_eig reconstructs random symmetric matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const RealMatrix s = random_symmetric(rng, n, 3.0);
    const SymEig eig = sym_eig(s);
    const RealMatrix d = RealMatrix::diagonal(std::span<const double>(eig.eigenvalues));
    const RealMatrix back = eig.eigenvectors * d * eig.eigenvectors.transpose();
    CHECK(norm_inf(back - s) <= 1e-9 * norm_inf(s));
    CHECK(norm_inf(eig.eigenvectors.transpose() * eig.eigenvectors - RealMatrix::identity(n)) <= 1e-10);
    CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
  }
}

TEST_CASE("complex_eig small cases") {
  const Complex i(0, 1);
  auto e = complex_eig(ComplexMatrix{{i, 0}, {0, i}});
  REQUIRE(e.size() == 2);
  for (auto z : e) CHECK(std::abs(z - i) < 1e-12);

  const Complex a = std::polar(1.0, 3.14159265358979323846 / 3);
  e = sorted_by_arg(complex_eig(ComplexMatrix{{a, 0}, {0, std::conj(a)}}));
  CHECK(std::abs(e[0] - std::conj(a)) < 1e-12);
  CHECK(std::abs(e[1] - a) < 1e-12);

  e = sorted_by_arg(complex_eig(ComplexMatrix{{0, 1}, {1, 0}}));
  CHECK(std::abs(e[0] - 1.0) < 1e-12);
  CHECK(std::abs(e[1] + 1.0) < 1e-12);
}

TEST_CASE("complex_eig on random unitary products stays on the circle") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 6;
    ComplexMatrix u = ComplexMatrix::identity(n);
    for (int f = 0; f < 3; ++f) {
      const RealMatrix h = random_symmetric(rng, n);
      const SymEig eig = sym_eig(h);
      ComplexMatrix d(n, n);
      for (std::size_t k = 0; k < n; ++k) d(k, k) = std::polar(1.0, eig.eigenvalues[k]);
      const ComplexMatrix q = complexify(eig.eigenvectors);
      u = u * (q * d * q.adjoint());
    }
    for (auto z : complex_eig(u)) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-8);
  }
}

TEST_CASE("complex_eig matches the characteristic polynomial of random matrices") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const ComplexMatrix c = complexify(random_matrix(rng, n, n), random_matrix(rng, n, n));
    for (auto z : complex_eig(c)) {
      const ComplexMatrix shifted = c - z * ComplexMatrix::identity(n);
      CHECK(std::abs(determinant(shifted)) <= 1e-8 * std::pow(norm_inf(c), static_cast<double>(n)));
    }
  }
}

TEST_CASE("hermitian_eigenvalues of a real embedding") {
  const Complex i(0, 1);
  const auto e = hermitian_eigenvalues(ComplexMatrix{{2, i}, {-i, 2}});
  CHECK(e[0] == doctest::Approx(1.0));
  CHECK(e[1] == doctest::Approx(3.0));
}

TEST_CASE("nullspace_basis") {
  auto k = nullspace_basis(RealMatrix(2, 2), 1e-8);
  CHECK(k.cols() == 2);
  k = nullspace_basis(RealMatrix{{1, 0}, {0, 0}}, 1e-8);
  REQUIRE(k.cols() == 1);
  CHECK(std::abs(k(0, 0)) < 1e-12);
  CHECK(std::abs(std::abs(k(1, 0)) - 1.0) < 1e-12);
  k = nullspace_basis(RealMatrix{{1, 1}, {1, 1}}, 1e-8);
  REQUIRE(k.cols() == 1);
  CHECK(std::abs(std::abs(k(0, 0)) - std::sqrt(0.5)) < 1e-12);
  CHECK(std::abs(k(0, 0) + k(1, 0)) < 1e-12);
}

TEST_CASE("ortho_projector") {
  CHECK(max_abs(ortho_projector(RealMatrix(2, 0))) == 0.0);
  CHECK(ortho_projector(RealMatrix{{1}, {0}}) == (RealMatrix{{1, 0}, {0, 0}}));
  const double r = std::sqrt(0.5);
  const RealMatrix p = ortho_projector(RealMatrix{{r}, {r}});
  CHECK(max_abs(p - RealMatrix{{0.5, 0.5}, {0.5, 0.5}}) < 1e-15);
  CHECK_THROWS_AS(ortho_projector(RealMatrix{{1}, {1}}), Error);
}

TEST_CASE("ortho_projector is idempotent and symmetric") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const RealMatrix q = maslov::testing::random_orthogonal(rng, n).block(0, 0, n, 1 + trial % (n - 1));
    const RealMatrix p = ortho_projector(q);
    CHECK(norm_inf(p * p - p) <= 1e-10);
    CHECK(asymmetry(p) <= 1e-12);
  }
}

TEST_CASE("solve") {
  const RealMatrix rhs{{1, 2}, {3, 4}};
  CHECK(max_abs(solve(RealMatrix::identity(2), rhs) - rhs) == 0.0);
  CHECK(max_abs(solve(RealMatrix{{2, 0}, {0, 4}}, RealMatrix::identity(2)) - RealMatrix{{0.5, 0}, {0, 0.25}}) <
        1e-15);
  CHECK(max_abs(solve(RealMatrix{{1, 1}, {0, 1}}, RealMatrix{{2}, {1}}) - RealMatrix{{1}, {1}}) < 1e-15);
  CHECK_THROWS_AS(solve(RealMatrix{{1, 1}, {1, 1}}, rhs), Error);
}

TEST_CASE("solve residuals on random well-conditioned systems") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const RealMatrix a = random_matrix(rng, n, n) + 3.0 * static_cast<double>(n) * RealMatrix::identity(n);
    const RealMatrix b = random_matrix(rng, n, 2);
    const RealMatrix x = solve(a, b);
    CHECK(norm_inf(a * x - b) <= 1e-12 * norm_inf(a) * norm_inf(x) + 1e-14);
    const ComplexMatrix ac = complexify(a, random_matrix(rng, n, n));
    const ComplexMatrix bc = complexify(b);
    CHECK(norm_inf(ac * solve(ac, bc) - bc) <= 1e-11 * (1.0 + norm_inf(ac)));
  }
}

TEST_CASE("sqrt_spd") {
  CHECK(max_abs(sqrt_spd(RealMatrix::identity(2)) - RealMatrix::identity(2)) < 1e-14);
  CHECK(max_abs(sqrt_spd(RealMatrix{{4, 0}, {0, 9}}) - RealMatrix{{2, 0}, {0, 3}}) < 1e-14);
  const RealMatrix s{{2, 1}, {1, 2}};
  const RealMatrix r = sqrt_spd(s);
  CHECK(max_abs(r * r - s) < 1e-13);
  CHECK(max_abs(inv_sqrt_spd(s) * r - RealMatrix::identity(2)) < 1e-13);
  CHECK_THROWS_AS(sqrt_spd(RealMatrix{{1, 0}, {0, -1}}), Error);
}

TEST_CASE("singular values and pseudo-inverse") {
  const auto sv = singular_values(RealMatrix{{3, 0}, {0, 4}, {0, 0}});
  CHECK(sv[0] == doctest::Approx(4.0));
  CHECK(sv[1] == doctest::Approx(3.0));
  const RealMatrix a{{1, 1}, {1, 1}};
  const RealMatrix pinv = pseudo_inverse(a);
  CHECK(max_abs(pinv - 0.25 * a) < 1e-14);
}

TEST_CASE("count_negative") {
  CHECK(count_negative({-2, -1e-12, 0, 3}, 1e-9) == 1);
  CHECK(count_negative({}, 1e-9) == 0);
}

}
