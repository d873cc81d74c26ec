#include <doctest.h>

#include <cmath>

#include "eit/errors.hpp"
#include "eit/liouville.hpp"
#include "fixtures.hpp"

using namespace eit;
using fixtures::li2;

TEST_SUITE("liouville_oracle") {
  TEST_CASE("population rows") {
    const auto s = li2();
    const DriveParams d{0.7, 900.0, 10.0, -5.0, 1.0};
    const auto sys = assemble(s, d);
    const auto& m = sys.matrix;
    CHECK(m[slot::rho33][slot::rho33] == doctest::Approx(-(s.gamma3 + s.transit)));
    CHECK(m[slot::rho33][slot::im32] == -900.0);
    CHECK(m[slot::rho22][slot::rho33] == doctest::Approx(s.W32()));
    CHECK(m[slot::rho11][slot::rho22] == doctest::Approx(s.W21()));
    CHECK(sys.rhs[slot::rho11] == doctest::Approx(-s.replenish));
    for (int i = 1; i < 9; ++i) CHECK(sys.rhs[i] == 0.0);
  }

  TEST_CASE("fields only move population between levels") {
    // Summing the three population rows, every coherence drops out: drives
    // redistribute population, only decay and transit change the total.
    const auto s = li2();
    const auto sys = assemble(s, {3.0, 700.0, -20.0, 40.0, 1.0});
    for (int c = slot::re21; c <= slot::im32; ++c) {
      const double total = sys.matrix[slot::rho11][c] + sys.matrix[slot::rho22][c] + sys.matrix[slot::rho33][c];
      CHECK(total == 0.0);
    }
    CHECK(sys.matrix[slot::rho11][slot::rho11] + sys.matrix[slot::rho22][slot::rho11] == doctest::Approx(-s.transit));
  }

  TEST_CASE("strong-probe state frozen from an independent solver") {
    const auto x = solve_steady_state(li2(), {5.0, 300.0, 40.0, -20.0, 1.0});
    CHECK(x.rho11 == doctest::Approx(9.980164212880002e-01).epsilon(1e-11));
    CHECK(x.rho22 == doctest::Approx(9.581902660414079e-05).epsilon(1e-10));
    CHECK(x.rho33 == doctest::Approx(3.048427479433294e-04).epsilon(1e-10));
  }

  TEST_CASE("solution satisfies the system and stays physical") {
    const auto s = li2();
    for (double g1 : {0.01, 1.0, 30.0})
      for (double g2 : {0.0, 100.0, 4747.0})
        for (double d : {-500.0, 0.0, 70.0}) {
          const DriveParams drv{g1, g2, d, -0.5 * d, 1.0};
          const auto x = solve_steady_state(s, drv);
          CHECK(relative_residual(assemble(s, drv), x) < 1e-12);
          CHECK(x.rho11 > 0.0);
          CHECK(x.rho22 >= 0.0);
          CHECK(x.rho33 >= 0.0);
          // |rho21|^2 <= rho11 rho22 for a positive semidefinite matrix.
          CHECK(std::norm(x.rho21) <= x.rho11 * x.rho22 * (1.0 + 1e-9) + 1e-300);
        }
  }

  TEST_CASE("pack and unpack round-trip") {
    DensityState x;
    x.rho11 = 0.9;
    x.rho22 = 0.01;
    x.rho33 = 0.002;
    x.rho21 = {1e-3, -2e-3};
    x.rho31 = {3e-4, 4e-4};
    x.rho32 = {-5e-5, 6e-5};
    const auto y = unpack(pack(x));
    CHECK(y.rho22 == x.rho22);
    CHECK(y.rho31 == x.rho31);
    CHECK(y.rho32 == x.rho32);
  }

  TEST_CASE("weak-probe agreement and its g1^2 departure") {
    const auto s = li2();
    const auto grid = standard_oracle_grid(s);
    CHECK(grid.delta1s.size() * grid.delta2s.size() * grid.g2s.size() == 125);
    const auto a = compare_with_analytic(s, 1e-3 * s.gamma2, grid);
    const auto b = compare_with_analytic(s, 1e-2 * s.gamma2, grid);
    CHECK(a.points == 125);
    CHECK(a.max_rel_dev() <= 1e-4);
    const double slope = std::log10(b.max_rel_dev() / a.max_rel_dev());
    CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
  }

  TEST_CASE("no transit loss leaves the system singular") {
    auto s = li2();
    s.transit = 0.0;
    CHECK_THROWS_AS(solve_steady_state(s, {0.1, 10.0, 0.0, 0.0, 1.0}), SingularSystem);
  }

  TEST_CASE("dense solver") {
    SquareMatrix<3> a{{{0.0, 2.0, 1.0}, {1.0, 1.0, 0.0}, {3.0, 0.0, 1.0}}};
    Vector<3> x{1.0, -2.0, 0.5};
    const auto b = multiply(a, x);
    const auto y = solve_dense<3>(a, b);
    for (int i = 0; i < 3; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-14));
    SquareMatrix<3> sing{{{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}, {1.0, 0.0, 1.0}}};
    CHECK_THROWS_AS(solve_dense<3>(sing, b), SingularSystem);
  }
}
