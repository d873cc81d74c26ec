#include "eit/liouville.hpp"

#include <cmath>

#include "eit/errors.hpp"

namespace eit {

SteadyStateSystem assemble(const CascadeSystem& sys, const DriveParams& drv) {
  using namespace slot;
  const double w = sys.transit;
  const double g1 = drv.g1;
  const double g2 = drv.g2;
  const double h1 = 0.5 * g1;
  const double h2 = 0.5 * g2;
  const double d1 = drv.delta1;
  const double d2 = drv.delta2;
  const double d12 = d1 + d2;
  const double r21 = sys.gamma21() + w;
  const double r31 = sys.gamma31() + w;
  const double r32 = sys.gamma32() + w;

  SteadyStateSystem s;
  auto& m = s.matrix;

  // rho11' = i g1/2 (rho12 - rho21) + W21 rho22 - w rho11 + Lambda
  m[rho11][rho11] = -w;
  m[rho11][rho22] = sys.W21();
  m[rho11][im21] = g1;
  s.rhs[rho11] = -sys.replenish;

  // rho22' = i g1/2 (rho21 - rho12) - i g2/2 (rho32 - rho23) - (gamma2 + w) rho22 + W32 rho33
  m[rho22][rho22] = -(sys.gamma2 + w);
  m[rho22][rho33] = sys.W32();
  m[rho22][im21] = -g1;
  m[rho22][im32] = g2;

  // rho33' = i g2/2 (rho32 - rho23) - (gamma3 + w) rho33
  m[rho33][rho33] = -(sys.gamma3 + w);
  m[rho33][im32] = -g2;

  // rho21' = i g1/2 (rho22 - rho11) - i g2/2 rho31 + i Delta1 rho21 - (gamma21 + w) rho21
  m[re21][re21] = -r21;
  m[re21][im21] = -d1;
  m[re21][im31] = h2;
  m[im21][rho11] = -h1;
  m[im21][rho22] = h1;
  m[im21][re21] = d1;
  m[im21][im21] = -r21;
  m[im21][re31] = -h2;

  // rho31' = i g1/2 rho32 - i g2/2 rho21 - (gamma31 + w) rho31 + i (Delta1 + Delta2) rho31
  m[re31][re31] = -r31;
  m[re31][im31] = -d12;
  m[re31][im21] = h2;
  m[re31][im32] = -h1;
  m[im31][re31] = d12;
  m[im31][im31] = -r31;
  m[im31][re21] = -h2;
  m[im31][re32] = h1;

  // rho32' = i g2/2 (rho33 - rho22) + i g1/2 rho31 + i Delta2 rho32 - (gamma32 + w) rho32
  m[re32][re32] = -r32;
  m[re32][im32] = -d2;
  m[re32][im31] = -h1;
  m[im32][re32] = d2;
  m[im32][im32] = -r32;
  m[im32][rho22] = -h2;
  m[im32][rho33] = h2;
  m[im32][re31] = h1;

  return s;
}

Vector<9> pack(const DensityState& x) {
  return {x.rho11,        x.rho22,        x.rho33,        x.rho21.real(), x.rho21.imag(),
          x.rho31.real(), x.rho31.imag(), x.rho32.real(), x.rho32.imag()};
}

DensityState unpack(const Vector<9>& v) {
  DensityState x;
  x.rho11 = v[slot::rho11];
  x.rho22 = v[slot::rho22];
  x.rho33 = v[slot::rho33];
  x.rho21 = {v[slot::re21], v[slot::im21]};
  x.rho31 = {v[slot::re31], v[slot::im31]};
  x.rho32 = {v[slot::re32], v[slot::im32]};
  return x;
}

DensityState solve_steady_state(const CascadeSystem& sys, const DriveParams& drv) {
  if (!(sys.transit > 0.0)) throw SingularSystem("steady state requires a positive transit rate");
  const SteadyStateSystem s = assemble(sys, drv);
  return unpack(solve_dense(s.matrix, s.rhs));
}

double relative_residual(const SteadyStateSystem& s, const DensityState& x) {
  const Vector<9> ax = multiply(s.matrix, pack(x));
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < 9; ++i) {
    num += (ax[i] - s.rhs[i]) * (ax[i] - s.rhs[i]);
    den += s.rhs[i] * s.rhs[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

OracleComparison compare_with_analytic(const CascadeSystem& sys, double g1,
                                       std::span<const double> delta1s,
                                       std::span<const double> delta2s,
                                       std::span<const double> g2s) {
  OracleComparison out;
  for (double g2 : g2s) {
    for (double d2 : delta2s) {
      for (double d1 : delta1s) {
        const DriveParams drv{g1, g2, d1, d2, sys.rho11_0()};
        const DensityState exact = solve_steady_state(sys, drv);
        const ExcitedPopulations approx = populations_analytic(sys, drv);
        auto rel = [](double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b); };
        out.max_rel_dev_rho22 = std::max(out.max_rel_dev_rho22, rel(approx.rho22, exact.rho22));
        if (g2 != 0.0)
          out.max_rel_dev_rho33 = std::max(out.max_rel_dev_rho33, rel(approx.rho33, exact.rho33));
        ++out.points;
      }
    }
  }
  return out;
}

OracleGrid standard_oracle_grid(const CascadeSystem& sys) {
  OracleGrid grid;
  for (double k : {-10.0, -1.0, 0.0, 1.0, 10.0}) {
    grid.delta1s.push_back(k * sys.gamma2);
    grid.delta2s.push_back(k * sys.gamma2);
  }
  for (double k : {0.1, 1.0, 3.0, 10.0, 100.0}) grid.g2s.push_back(k * sys.gamma2);
  return grid;
}

OracleComparison compare_with_analytic(const CascadeSystem& sys, double g1, const OracleGrid& grid) {
  return compare_with_analytic(sys, g1, grid.delta1s, grid.delta2s, grid.g2s);
}

}  // namespace eit
