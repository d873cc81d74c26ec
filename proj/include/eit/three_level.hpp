#pragma once

#include <complex>

namespace eit {

/// Rotational branch of a transition: P (J decreases by one going up), Q, R.
enum class Branch { P, Q, R };

/// Open cascade |1> -> |2> -> |3>. All rates are angular frequencies in Mrad/s.
struct CascadeSystem {
  double omega21_cm = 0.0;  // |1>-|2> transition wavenumber
  double omega32_cm = 0.0;  // |2>-|3> transition wavenumber
  double gamma2 = 0.0;      // total radiative decay of level 2
  double gamma3 = 0.0;      // total radiative decay of level 3
  double b2 = 1.0;          // fraction of level-2 decay that returns to level 1
  double b3 = 1.0;          // fraction of level-3 decay that returns to level 2
  double gamma12_c = 0.0;   // collisional dephasing of rho21
  double gamma13_c = 0.0;   // collisional dephasing of rho31
  double gamma23_c = 0.0;   // collisional dephasing of rho32
  double transit = 0.0;     // w: transit-time loss of every element
  double replenish = 0.0;   // Lambda: ground-state feed
  int J1 = 1;
  int J2 = 1;
  int J3 = 1;
  Branch probe_branch = Branch::P;
  Branch coupling_branch = Branch::Q;

  double W21() const { return b2 * gamma2; }
  double W32() const { return b3 * gamma3; }

  // Coherence decay rates, collisional dephasing included. The transit loss w is
  // added separately wherever it appears in the equations of motion.
  double gamma21() const { return 0.5 * gamma2 + gamma12_c; }
  double gamma31() const { return 0.5 * gamma3 + gamma13_c; }
  double gamma32() const { return 0.5 * (gamma2 + gamma3) + gamma23_c; }

  /// Unperturbed ground population Lambda / w.
  double rho11_0() const { return replenish / transit; }

  /// True when W32 = gamma3 + w (relative tolerance 1e-12).
  bool is_closed() const;

  /// Throws DomainError when a rate is negative, a branching ratio is out of
  /// range, or any field is not finite. b3 may exceed one up to the value that
  /// closes the system, (gamma3 + w) / gamma3.
  void validate() const;
};

struct DriveParams {
  double g1 = 0.0;       // probe Rabi frequency
  double g2 = 0.0;       // coupling Rabi frequency
  double delta1 = 0.0;   // effective probe detuning
  double delta2 = 0.0;   // effective coupling detuning
  double rho11_0 = 1.0;  // ground population without the probe
};

/// Steady-state density matrix, upper-triangle coherences only.
struct DensityState {
  double rho11 = 0.0;
  double rho22 = 0.0;
  double rho33 = 0.0;
  std::complex<double> rho21;
  std::complex<double> rho31;
  std::complex<double> rho32;
};

// Helper quantities of the weak-probe solution.
double helper_A(const CascadeSystem& sys, const DriveParams& drv);
double helper_D(const CascadeSystem& sys, const DriveParams& drv);
/// D(Delta2) fully expanded, without going through helper_A.
double helper_D_direct(const CascadeSystem& sys, const DriveParams& drv);

/// Non-normalized level-2 population, lowest order in g1 and all orders in g2.
double rho22_analytic(const CascadeSystem& sys, const DriveParams& drv);
/// Non-normalized level-3 population, lowest order in g1 and all orders in g2.
double rho33_analytic(const CascadeSystem& sys, const DriveParams& drv);

struct ExcitedPopulations {
  double rho22 = 0.0;
  double rho33 = 0.0;
};

/// Both populations with shared intermediates. Same values as the two
/// functions above; this is the form used in the spectrum inner loop.
ExcitedPopulations populations_analytic(const CascadeSystem& sys, const DriveParams& drv);

namespace closed_limit {
// Reduced forms valid only when W32 = gamma3 + w, where the open-system
// correction terms vanish.
double helper_D(const CascadeSystem& sys, const DriveParams& drv);
double rho22(const CascadeSystem& sys, const DriveParams& drv);
}  // namespace closed_limit

}  // namespace eit
