#include <doctest.h>

#include <cmath>
#include <vector>

#include "maslov/config.hpp"
#include "maslov/errors.hpp"
#include "maslov/linalg.hpp"
#include "maslov/shooting.hpp"
#include "support.hpp"

using namespace maslov;

namespace {

BoundaryPair dirichlet(std::size_t n) {
  return normalize_pair(validate_pair(RealMatrix::identity(n), RealMatrix(n, n)));
}

std::vector<double> interior_grid(int count) {
  std::vector<double> g;
  for (int k = 1; k < count; ++k) g.push_back(static_cast<double>(k) / count);
  return g;
}

double smallest_gram_eigenvalue(const Frame& f) { return sym_eigenvalues(symmetrized(f.gram)).front(); }

}  // namespace

TEST_SUITE("shooting") {

TEST_CASE("system_matrix") {
  const Potential zero = Potential::constant(RealMatrix(2, 2));
  RealMatrix expected(4, 4);
  expected.set_block(0, 2, RealMatrix::identity(2));
  CHECK(system_matrix(0.3, 0.0, zero) == expected);
  CHECK(system_matrix(0.3, -1.0, Potential::constant(RealMatrix{{0.0}})) == (RealMatrix{{0, 1}, {1, 0}}));
  const Potential v(1, [](double x) { return RealMatrix{{x}}; });
  CHECK(max_abs(system_matrix(0.5, 2.0, v) - RealMatrix{{0, 1}, {-1.5, 0}}) < 1e-15);
}

TEST_CASE("potential checks symmetry") {
  const Potential bad(2, [](double) { return RealMatrix{{0, 1}, {0, 0}}; });
  CHECK_THROWS_AS(bad(0.5), Error);
}

TEST_CASE("free Dirichlet frame is linear") {
  const Frame f = integrate_frame(dirichlet(2), Potential::constant(RealMatrix(2, 2)), 0.0, 1.0, 2000);
  CHECK(max_abs(f.X + RealMatrix::identity(2)) <= 1e-10);
  CHECK(max_abs(f.Z + RealMatrix::identity(2)) <= 1e-10);
  CHECK(lagrangian_defect(f) <= 1e-12);
  CHECK(f.gram(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("Dirichlet frame below the spectrum is hyperbolic") {
  const Frame f = integrate_frame(dirichlet(1), maslov::testing::constant_potential(0.0), -4.0, 1.0, 2000);
  CHECK(std::abs(f.X(0, 0) + std::sinh(2.0) / 2.0) <= 1e-8);
  CHECK(std::abs(f.Z(0, 0) + std::cosh(2.0)) <= 1e-8);
  CHECK(lagrangian_defect(f) <= 1e-12);
}

TEST_CASE("frame at tiny s equals the initial data") {
  const double r = std::sqrt(0.5);
  const auto bc = normalize_pair(validate_pair(RealMatrix{{r, 0}, {0, 1}}, RealMatrix{{r, 0}, {0, 0}}));
  const Frame f = integrate_frame(bc, Potential::constant(RealMatrix{{-3, 1}, {1, 2}}), -2.0, 1e-6, 2000);
  CHECK(max_abs(f.X - bc.a2.transpose()) <= 1e-5);
  CHECK(max_abs(f.Z + bc.a1.transpose()) <= 1e-5);
}

TEST_CASE("lagrangian_defect of a non-Lagrangian pair") {
  Frame f;
  f.X = RealMatrix::identity(2);
  f.Z = RealMatrix{{0, -1}, {1, 0}};
  CHECK(lagrangian_defect(f) == doctest::Approx(2.0));
}

TEST_CASE("built-in examples stay Lagrangian with positive gram") {
  for (int k = 1; k <= 4; ++k) {
    const Problem p = load_config("example" + std::to_string(k));
    for (double lambda : {-5.0, 0.0, -200.0}) {
      for (double s : {0.01, 0.3, 1.0}) {
        const Frame f = integrate_frame(p.left, p.potential, lambda, s, 2000);
        CHECK(relative_lagrangian_defect(f) <= 1e-9);
        CHECK(smallest_gram_eigenvalue(f) > 0.0);
        const auto gram_frame = sym_eigenvalues(f.X.transpose() * f.X + f.Z.transpose() * f.Z);
        CHECK(gram_frame.front() > 1e-8);
      }
    }
  }
}

TEST_CASE("RK4 converges at fourth order") {
  const auto bc = dirichlet(1);
  const Potential v = maslov::testing::constant_potential(0.0);
  const double exact = -std::sinh(3.0) / 3.0;
  const double coarse = std::abs(integrate_frame(bc, v, -9.0, 1.0, 160).X(0, 0) - exact);
  const double fine = std::abs(integrate_frame(bc, v, -9.0, 1.0, 320).X(0, 0) - exact);
  CHECK(coarse / fine >= 12.0);
}

TEST_CASE("advance_frame continues integrate_frame") {
  const Problem p = load_config("example3");
  const Frame half = integrate_frame(p.left, p.potential, -7.0, 0.5, 1000);
  const Frame full = integrate_frame(p.left, p.potential, -7.0, 1.0, 2000);
  const Frame cont = advance_frame(half, p.potential, 1.0, 1.0 / 2000);
  const RealMatrix t = solve(cont.X.transpose() * cont.X + cont.Z.transpose() * cont.Z,
                             cont.X.transpose() * full.X + cont.Z.transpose() * full.Z);
  CHECK(max_abs(cont.X * t - full.X) <= 1e-8 * (1.0 + max_abs(full.X)));
}

TEST_CASE("winding continues arg det(X + iZ)") {
  const double k = std::sqrt(50.0);
  const Frame f = integrate_frame(dirichlet(1), maslov::testing::constant_potential(-50.0), 0.0, 1.0, 2000);
  double expected = std::atan2(-1.0, 0.0);
  const int grid = 100000;
  for (int j = 1; j <= grid; ++j) {
    const double x0 = (j - 1.0) / grid, x1 = static_cast<double>(j) / grid;
    const Complex a(-std::sin(k * x0) / k, -std::cos(k * x0));
    const Complex b(-std::sin(k * x1) / k, -std::cos(k * x1));
    expected += std::arg(b / a);
  }
  CHECK(std::abs(f.winding - expected) <= 1e-6);
  CHECK(expected < -2.0 * 3.14159265358979323846);

  const Problem ex3 = load_config("example3");
  for (double lambda : {0.0, -7.0, -400.0}) {
    const Frame g = integrate_frame(ex3.left, ex3.potential, lambda, 1.0, 2000);
    const Complex d = determinant(complexify(g.X, g.Z));
    CHECK(std::abs(std::polar(1.0, g.winding) - d / std::abs(d)) <= 1e-9);
  }
}

TEST_CASE("Dirichlet kernel crossings") {
  const auto grid = interior_grid(100);
  CHECK(dirichlet_kernel_count(dirichlet(2), Potential::constant(RealMatrix(2, 2)), grid) == 0);

  const auto c = dirichlet_kernel_crossings(dirichlet(1), maslov::testing::constant_potential(-50.0), grid);
  REQUIRE(c.size() == 2);
  const double pi = 3.14159265358979323846;
  CHECK(std::abs(c[0].s - pi / std::sqrt(50.0)) <= 1e-6);
  CHECK(std::abs(c[1].s - 2 * pi / std::sqrt(50.0)) <= 1e-6);
  CHECK(c[0].multiplicity == 1);

  const Problem ex1 = load_config("example1");
  CHECK(dirichlet_kernel_count(ex1.left, ex1.potential, grid) == 2);
}

TEST_CASE("repeated Dirichlet crossing has full multiplicity") {
  const auto c = dirichlet_kernel_crossings(dirichlet(2), Potential::constant(-50.0 * RealMatrix::identity(2)),
                                            interior_grid(100));
  REQUIRE(c.size() == 2);
  CHECK(c[0].multiplicity == 2);
}

}
