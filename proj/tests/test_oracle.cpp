#include <doctest.h>

#include <cmath>
#include <vector>

#include "maslov/config.hpp"
#include "maslov/linalg.hpp"
#include "maslov/oracle.hpp"
#include "support.hpp"

using namespace maslov;

namespace {

constexpr double kPi = 3.14159265358979323846;

Problem scalar(double v, const RealMatrix& a1, const RealMatrix& a2, const RealMatrix& b1, const RealMatrix& b2) {
  return make_problem(maslov::testing::constant_potential(v), a1, a2, b1, b2);
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("free Dirichlet spectrum") {
  const auto form = oracle::assemble(maslov::testing::scalar_dirichlet(0.0), 1.0, 2000);
  const auto e = oracle::lowest_eigenvalues(form, 3);
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(e[k - 1] / (k * k * kPi * kPi) - 1.0) <= 1e-3);
  CHECK(oracle::negative_count(form) == 0);
}

TEST_CASE("free Neumann spectrum starts at zero") {
  const RealMatrix one{{1.0}}, zero{{0.0}};
  const auto form = oracle::assemble(scalar(0.0, zero, one, zero, one), 1.0, 500);
  const auto e = oracle::lowest_eigenvalues(form, 2);
  CHECK(std::abs(e[0]) <= 1e-9);
  CHECK(e[1] == doctest::Approx(kPi * kPi).epsilon(1e-4));
}

TEST_CASE("Robin terms of the form") {
  const double r = std::sqrt(0.5);
  const RealMatrix a{{r}};
  const auto form = oracle::assemble(scalar(0.0, a, a, a, a), 1.0, 64);
  // Lambda = -1 at both ends: +(-1) u(0)^2 - (-1) u(1)^2 on top of the stiffness.
  const RealMatrix k = form.stiffness_dense();
  const double h = 1.0 / 64;
  CHECK(k(0, 0) == doctest::Approx(1.0 / h - 1.0));
  CHECK(k(64, 64) == doctest::Approx(1.0 / h + 1.0));
}

TEST_CASE("assembled matrices are symmetric and the mass is positive definite") {
  for (int k = 1; k <= 4; ++k) {
    const auto form = oracle::assemble(load_config("example" + std::to_string(k)), 0.7, 64);
    const RealMatrix kd = form.stiffness_dense();
    const RealMatrix md = form.mass_dense();
    CHECK(asymmetry(kd) <= 1e-10 * norm_inf(kd));
    CHECK(asymmetry(md) <= 1e-14);
    CHECK(sym_eigenvalues(md).front() > 0.0);
  }
}

TEST_CASE("inertia count matches a dense eigensolve") {
  const auto form = oracle::assemble(load_config("example4"), 1.0, 64);
  const RealMatrix w = inv_sqrt_spd(form.mass_dense());
  const auto dense = sym_eigenvalues(symmetrized(w * form.stiffness_dense() * w));
  for (double mu : {-20.0, -8.0, -1.0, 0.0, 30.0}) {
    int expected = 0;
    for (double e : dense) expected += e < mu ? 1 : 0;
    CHECK(oracle::count_below(form, mu) == expected);
  }
}

TEST_CASE("negative counts of the built-in examples") {
  const int expected[] = {2, 1, 3, 3};
  for (int k = 1; k <= 4; ++k) {
    const Problem p = load_config("example" + std::to_string(k));
    CHECK(oracle::negative_count(oracle::assemble(p, 1.0, 2000)) == expected[k - 1]);
    CHECK(oracle::negative_count(oracle::assemble(p, 1.0, 1000)) == expected[k - 1]);
    CHECK(oracle::mesh_stable_negative_count(p, 1000) == expected[k - 1]);
  }
}

TEST_CASE("eigenvalue error decays quadratically in the mesh") {
  const Problem p = maslov::testing::scalar_dirichlet(0.0);
  const double exact = kPi * kPi;
  const double coarse = oracle::lowest_eigenvalues(oracle::assemble(p, 1.0, 100), 1)[0] - exact;
  const double fine = oracle::lowest_eigenvalues(oracle::assemble(p, 1.0, 200), 1)[0] - exact;
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("eigencurves") {
  const std::vector<double> small{0.02};
  const auto two = oracle::eigencurves(load_config("example2"), small, 2, 2000, oracle::Convention::Unscaled);
  CHECK(std::abs(two[0].eigenvalues[0] + 0.3633) <= 0.01);

  const auto four = oracle::eigencurves(load_config("example4"), small, 2, 2000, oracle::Convention::Unscaled);
  CHECK(std::abs(four[0].eigenvalues[0] + 11.0) <= 0.5);
  CHECK(std::abs(four[0].eigenvalues[1] + 6.0) <= 0.5);

  const std::vector<double> grid{0.25, 0.5, 1.0};
  const auto free = oracle::eigencurves(maslov::testing::scalar_dirichlet(0.0), grid, 1, 1000,
                                        oracle::Convention::Unscaled);
  for (const auto& row : free) CHECK(row.eigenvalues[0] == doctest::Approx(kPi * kPi / (row.s * row.s)).epsilon(1e-3));
  const auto scaled = oracle::eigencurves(maslov::testing::scalar_dirichlet(0.0), grid, 1, 1000);
  for (const auto& row : scaled) CHECK(row.eigenvalues[0] == doctest::Approx(kPi * kPi).epsilon(1e-3));
  CHECK_THROWS(oracle::eigencurves(load_config("example1"), grid, 9, 100));
}

}
