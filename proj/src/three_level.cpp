#include "eit/three_level.hpp"

#include <cmath>
#include <string>

#include "eit/errors.hpp"

namespace eit {

namespace {

using cplx = std::complex<double>;

void require_finite(const DriveParams& drv) {
  if (!std::isfinite(drv.g1) || !std::isfinite(drv.g2) || !std::isfinite(drv.delta1) ||
      !std::isfinite(drv.delta2) || !std::isfinite(drv.rho11_0)) {
    throw DomainError("drive parameters must be finite");
  }
}

// 1 - W32 / (gamma3 + w): fraction of level-3 population that leaves the system.
double open_fraction(const CascadeSystem& sys) {
  return 1.0 - sys.W32() / (sys.gamma3 + sys.transit);
}

// [Delta1 + i(g21+w)][Delta1 + Delta2 + i(g31+w)] - g2^2/4
cplx dressed_denominator(const CascadeSystem& sys, const DriveParams& drv) {
  const double w = sys.transit;
  const cplx one(drv.delta1, sys.gamma21() + w);
  const cplx two(drv.delta1 + drv.delta2, sys.gamma31() + w);
  return one * two - 0.25 * drv.g2 * drv.g2;
}

}  // namespace

bool CascadeSystem::is_closed() const {
  const double target = gamma3 + transit;
  return std::abs(W32() - target) <= 1e-12 * std::abs(target);
}

void CascadeSystem::validate() const {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
  };
  for (double v : {omega21_cm, omega32_cm, gamma2, gamma3, b2, b3, gamma12_c, gamma13_c,
                   gamma23_c, transit, replenish}) {
    check(std::isfinite(v), "cascade parameters must be finite");
  }
  check(gamma2 >= 0.0 && gamma3 >= 0.0, "decay rates must be non-negative");
  check(gamma12_c >= 0.0 && gamma13_c >= 0.0 && gamma23_c >= 0.0,
        "dephasing rates must be non-negative");
  check(transit >= 0.0, "transit rate must be non-negative");
  check(replenish >= 0.0, "replenishment rate must be non-negative");
  check(b2 >= 0.0 && b2 <= 1.0, "b2 must lie in [0, 1]");
  const double b3_max = gamma3 > 0.0 ? (gamma3 + transit) / gamma3 : 1.0;
  check(b3 >= 0.0 && b3 <= b3_max * (1.0 + 1e-12), "b3 must lie in [0, (gamma3 + w) / gamma3]");
  check(J1 >= 0 && J2 >= 0 && J3 >= 0, "rotational quantum numbers must be non-negative");
}

double helper_A(const CascadeSystem& sys, const DriveParams& drv) {
  const double w = sys.transit;
  const double g32w = sys.gamma32() + w;
  return drv.delta2 * drv.delta2 + g32w * g32w +
         drv.g2 * drv.g2 * g32w / (2.0 * (sys.gamma3 + w));
}

double helper_D(const CascadeSystem& sys, const DriveParams& drv) {
  const double w = sys.transit;
  return helper_A(sys, drv) * (sys.gamma2 + w) +
         0.5 * drv.g2 * drv.g2 * (sys.gamma32() + w) * open_fraction(sys);
}

double helper_D_direct(const CascadeSystem& sys, const DriveParams& drv) {
  const double w = sys.transit;
  const double g32w = sys.gamma32() + w;
  const double g2sq = drv.g2 * drv.g2;
  const double g2w = sys.gamma2 + w;
  const double g3w = sys.gamma3 + w;
  return drv.delta2 * drv.delta2 * g2w + g32w * g32w * g2w + g2sq * g32w * g2w / (2.0 * g3w) +
         0.5 * g2sq * g32w - 0.5 * g2sq * g32w * sys.W32() / g3w;
}

ExcitedPopulations populations_analytic(const CascadeSystem& sys, const DriveParams& drv) {
  require_finite(drv);
  const double w = sys.transit;
  const double g2sq = drv.g2 * drv.g2;
  const double g32w = sys.gamma32() + w;
  const double g3w = sys.gamma3 + w;
  const double A = helper_A(sys, drv);
  const double D = helper_D(sys, drv);
  const cplx den = dressed_denominator(sys, drv);
  const cplx two_photon(drv.delta1 + drv.delta2, sys.gamma31() + w);
  const cplx coupling_branch(drv.delta2, -g32w);

  const cplx num22 = 0.25 * g2sq * open_fraction(sys) * coupling_branch + A * two_photon;
  const cplx num33 = -2.0 * g32w * two_photon + (sys.gamma2 + w) * coupling_branch;

  const double prefactor = drv.g1 * drv.g1 * drv.rho11_0;
  ExcitedPopulations out;
  out.rho22 = -prefactor / (2.0 * D) * (num22 / den).imag();
  out.rho33 = prefactor * g2sq / (8.0 * D * g3w) * (num33 / den).imag();
  return out;
}

double rho22_analytic(const CascadeSystem& sys, const DriveParams& drv) {
  return populations_analytic(sys, drv).rho22;
}

double rho33_analytic(const CascadeSystem& sys, const DriveParams& drv) {
  if (!(sys.gamma3 + sys.transit > 0.0)) throw DomainError("gamma3 + w must be positive");
  return populations_analytic(sys, drv).rho33;
}

namespace closed_limit {

double helper_D(const CascadeSystem& sys, const DriveParams& drv) {
  return helper_A(sys, drv) * (sys.gamma2 + sys.transit);
}

double rho22(const CascadeSystem& sys, const DriveParams& drv) {
  require_finite(drv);
  const double w = sys.transit;
  const cplx two_photon(drv.delta1 + drv.delta2, sys.gamma31() + w);
  const cplx den = dressed_denominator(sys, drv);
  return -drv.g1 * drv.g1 * drv.rho11_0 / (2.0 * (sys.gamma2 + w)) * (two_photon / den).imag();
}

}  // namespace closed_limit

}  // namespace eit
