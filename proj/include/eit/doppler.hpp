#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace eit {

enum class Geometry { counter_propagating, co_propagating };

/// Thermal molecular ensemble along the beam axis.
struct Ensemble {
  double temperature_K = 0.0;
  double mass_amu = 0.0;
  double most_probable_speed = 0.0;  // u_p, m/s

  static Ensemble from_temperature(double temperature_K, double mass_amu);
  /// Inverts the Gaussian Doppler width: FWHM = nu * u_p * 2 sqrt(ln 2).
  static Ensemble from_doppler_fwhm(double fwhm_MHz, double probe_wavenumber_cm);
  /// Gaussian Doppler FWHM in MHz that this ensemble produces at a wavenumber.
  double doppler_fwhm_MHz(double wavenumber_cm) const;
};

/// One-dimensional Maxwellian N(vz), normalized on the real line.
double maxwellian(double vz, double most_probable_speed);

enum class QuadratureScheme { uniform_trapezoid, gauss_hermite };

struct QuadratureSpec {
  QuadratureScheme scheme = QuadratureScheme::uniform_trapezoid;
  int node_count = 4001;
  double span = 4.0;  // half-width in units of u_p (trapezoid only)
  double refinement_tolerance = 1e-4;

  /// Throws DomainError: trapezoid rules need an odd count of at least 51,
  /// Gauss-Hermite at least 2.
  void validate() const;
};

/// Two quadrature rules over a shared node list: the requested rule and its
/// refinement. For the trapezoid the refinement halves the step and the coarse
/// weights are zero on the inserted midpoints; for Gauss-Hermite the two rules
/// have disjoint node sets. Both weight vectors already include N(vz) dvz and
/// sum to one.
struct PairedRule {
  std::vector<double> nodes;
  std::vector<double> coarse_weights;
  std::vector<double> fine_weights;
};

PairedRule make_paired_rule(const Ensemble& ens, const QuadratureSpec& q);

/// Gauss-Hermite nodes and weights for weight function exp(-x^2).
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n);

struct DetuningPair {
  double delta1 = 0.0;
  double delta2 = 0.0;
};

/// Detunings seen by a molecule moving with vz, from rest-frame detunings and
/// the transition angular frequencies (all in the same angular unit):
///   Delta1 = (1 - vz/c) delta1 - (vz/c) omega21
///   Delta2 = (1 + vz/c) delta2 + (vz/c) omega32   (counter-propagating)
/// The laser frequency is omega21 + delta1, so this is delta1 - (vz/c) omega_laser.
DetuningPair velocity_detunings(double delta1, double delta2, double omega21, double omega32,
                                double vz, Geometry geometry);

/// Maxwellian average of `observable(vz)`. The refined rule is evaluated as
/// well; if the two disagree by more than refinement_tolerance times
/// max(|result|, <|observable|>), QuadratureNotConverged is thrown.
double doppler_average(const std::function<double(double)>& observable, const Ensemble& ens,
                       const QuadratureSpec& q);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace eit
