#pragma once

#include <vector>

#include "eit/doppler.hpp"
#include "eit/three_level.hpp"

namespace eit {

/// Coupling of one |M| pathway 1 -> 2 -> 3 under linearly polarized light.
struct SublevelChannel {
  int abs_m = 0;
  int multiplicity = 1;  // 1 for M = 0, 2 for +-|M|
  double f_probe = 0.0;
  double f_coupling = 0.0;
  double g1 = 0.0;  // Mrad/s
  double g2 = 0.0;  // Mrad/s
};

/// Channels in ascending |M|. Ground sublevels the probe cannot reach are
/// omitted.
using ChannelSet = std::vector<SublevelChannel>;

/// |M| / sqrt(J (J + 1)). Throws DomainError if |M| > J or J < 1.
double line_strength_Q(int J, int M);
/// sqrt((J^2 - M^2) / ((2J + 1)(2J - 1))), J the lower-level (larger) J.
double line_strength_P(int J, int M);

/// Line-strength factor of a Delta M = 0 transition from J_lower to J_upper.
/// Throws UnsupportedBranch for R, DomainError when the J values do not match
/// the branch.
double line_strength(Branch branch, int J_lower, int J_upper, int M);

/// Rabi frequency mu E / hbar in Mrad/s for a dipole in atomic units.
double rabi_frequency(double dipole_au, double line_strength, double field_V_m);

ChannelSet build_channels(const CascadeSystem& sys, double mu_probe_au, double mu_coupling_au,
                          double probe_field_V_m, double coupling_field_V_m);

/// Multiplicity-weighted sum over channels in ascending |M|.
template <typename Fn>
double sublevel_sum(Fn&& signal, const ChannelSet& channels) {
  CompensatedSum total;
  for (const auto& ch : channels) total.add(ch.multiplicity * signal(ch));
  return total.value();
}

/// Probe-coupled sublevels counted with multiplicity.
int probe_coupling_count(const ChannelSet& channels);
/// Coupling-coupled sublevels counted with multiplicity.
int coupling_coupling_count(const ChannelSet& channels);

}  // namespace eit
