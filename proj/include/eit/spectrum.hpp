#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eit/doppler.hpp"
#include "eit/sublevels.hpp"
#include "eit/three_level.hpp"

namespace eit {

struct LaserPair {
  double probe_power_W = 0.0;
  double probe_waist_m = 0.0;
  double coupling_power_W = 0.0;
  double coupling_waist_m = 0.0;
  Geometry geometry = Geometry::counter_propagating;

  double probe_field() const;
  double coupling_field() const;
};

/// Vibronic transition dipole moments in atomic units.
struct TransitionDipoles {
  double probe_au = 0.0;
  double coupling_au = 0.0;
};

/// Everything that stays fixed while the probe is scanned.
struct Model {
  CascadeSystem system;
  LaserPair lasers;
  TransitionDipoles dipoles;
  Ensemble ensemble;
  QuadratureSpec quadrature;

  ChannelSet channels() const;
};

enum class Engine { analytic, oracle };
enum class Channel { rho22, rho33 };

const char* to_string(Engine e);
const char* to_string(Channel c);

struct ScanConfig {
  std::vector<double> delta1_MHz;  // strictly increasing, cyclic MHz
  double delta2_MHz = 0.0;
  bool want_rho22 = true;
  bool want_rho33 = true;
  bool doppler_on = true;
  bool m_sum_on = true;
  /// With m_sum_on false, restrict to this |M|; without it a single bare
  /// channel with unit line strengths is used.
  std::optional<int> only_abs_m;
  Engine engine = Engine::analytic;
  unsigned threads = 1;

  void validate() const;
};

/// Evenly spaced grid of `points` values from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, int points);

using Metadata = std::vector<std::pair<std::string, std::string>>;

struct Spectrum {
  std::vector<double> delta1_MHz;
  std::vector<double> rho22;
  std::vector<double> rho33;
  Metadata metadata;
  /// Largest |fine - coarse| quadrature change relative to the signal peak.
  double quadrature_refinement = 0.0;

  const std::vector<double>& signal(Channel c) const { return c == Channel::rho22 ? rho22 : rho33; }
};

/// Doppler-averaged, |M|-summed fluorescence signals over the scan grid.
Spectrum simulate(const Model& model, const ScanConfig& scan);
Spectrum simulate(const Model& model, const ChannelSet& channels, const ScanConfig& scan);

/// Same as simulate but one spectrum per channel, each already weighted by its
/// multiplicity. Summing them in order reproduces simulate.
std::vector<Spectrum> per_m_components(const Model& model, const ScanConfig& scan);
std::vector<Spectrum> per_m_components(const Model& model, const ChannelSet& channels,
                                       const ScanConfig& scan);

/// Probe detuning (MHz) where the EIT dip appears for a coupling detuning
/// delta2 (MHz): -(k1/k2) delta2 with Doppler broadening, -delta2 without.
double predict_dip_position(double delta2_MHz, double omega1_cm, double omega2_cm,
                            bool doppler_on);

struct LineFeatures {
  std::vector<double> peak_positions;  // MHz, ascending
  double dip_position = 0.0;           // MHz
  double dip_depth_fraction = 0.0;     // 1 - dip / baseline
  double dip_width = 0.0;              // full width at half dip depth, MHz
  double fwhm = 0.0;                   // full width at half maximum of the whole line, MHz
  double at_splitting = 0.0;           // distance between the two main peaks, MHz
};

/// Throws FewerThanTwoPeaks or NoDipFound.
LineFeatures extract_features(const Spectrum& s, Channel channel);
LineFeatures extract_features(const std::vector<double>& x, const std::vector<double>& y);

/// Width between the outermost half-maximum crossings, linearly interpolated.
double full_width_half_max(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace eit
