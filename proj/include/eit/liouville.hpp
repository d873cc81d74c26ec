#pragma once

#include <span>
#include <vector>

#include "eit/linear_solve.hpp"
#include "eit/three_level.hpp"

namespace eit {

/// Real steady-state form of the rotating-frame equations of motion,
/// matrix * x = rhs, with unknowns ordered as
/// [rho11, rho22, rho33, Re rho21, Im rho21, Re rho31, Im rho31, Re rho32, Im rho32].
/// Row i holds the coefficients of d(x_i)/dt; rhs carries the source term
/// moved to the right-hand side (-Lambda in the rho11 row, zero elsewhere).
struct SteadyStateSystem {
  SquareMatrix<9> matrix{};
  Vector<9> rhs{};
};

namespace slot {
inline constexpr int rho11 = 0;
inline constexpr int rho22 = 1;
inline constexpr int rho33 = 2;
inline constexpr int re21 = 3;
inline constexpr int im21 = 4;
inline constexpr int re31 = 5;
inline constexpr int im31 = 6;
inline constexpr int re32 = 7;
inline constexpr int im32 = 8;
}  // namespace slot

SteadyStateSystem assemble(const CascadeSystem& sys, const DriveParams& drv);

/// Exact steady state, no perturbative truncation in g1. Requires w > 0;
/// throws SingularSystem otherwise. drv.rho11_0 is ignored here: the ground
/// population follows from Lambda and w.
DensityState solve_steady_state(const CascadeSystem& sys, const DriveParams& drv);

/// ||A x - b|| / ||b|| for a state produced by solve_steady_state.
double relative_residual(const SteadyStateSystem& s, const DensityState& x);

Vector<9> pack(const DensityState& x);
DensityState unpack(const Vector<9>& v);

/// Largest relative deviation between the weak-probe closed forms and the
/// exact steady state over a (delta1, delta2, g2) grid.
struct OracleComparison {
  double max_rel_dev_rho22 = 0.0;
  double max_rel_dev_rho33 = 0.0;
  int points = 0;
  double max_rel_dev() const {
    return max_rel_dev_rho22 > max_rel_dev_rho33 ? max_rel_dev_rho22 : max_rel_dev_rho33;
  }
};

OracleComparison compare_with_analytic(const CascadeSystem& sys, double g1,
                                       std::span<const double> delta1s,
                                       std::span<const double> delta2s,
                                       std::span<const double> g2s);


/// The 5 x 5 x 5 comparison grid used by the oracle check: detunings of
/// {-10, -1, 0, 1, 10} gamma2 for both fields and g2 from 0.1 gamma2 (weak)
/// to 100 gamma2 (strong coupling). Angular units.
struct OracleGrid {
  std::vector<double> delta1s;
  std::vector<double> delta2s;
  std::vector<double> g2s;
};
OracleGrid standard_oracle_grid(const CascadeSystem& sys);
OracleComparison compare_with_analytic(const CascadeSystem& sys, double g1, const OracleGrid& grid);

}  // namespace eit
