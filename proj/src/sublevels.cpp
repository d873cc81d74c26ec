#include "eit/sublevels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "eit/errors.hpp"
#include "eit/units.hpp"

namespace eit {

double line_strength_Q(int J, int M) {
  const int m = std::abs(M);
  if (J < 1 || m > J)
    throw DomainError("Q line strength needs J >= 1 and |M| <= J (J=" + std::to_string(J) +
                      ", M=" + std::to_string(M) + ")");
  return m / std::sqrt(static_cast<double>(J) * (J + 1));
}

double line_strength_P(int J, int M) {
  const int m = std::abs(M);
  if (J < 1 || m > J)
    throw DomainError("P line strength needs J >= 1 and |M| <= J (J=" + std::to_string(J) +
                      ", M=" + std::to_string(M) + ")");
  return std::sqrt(static_cast<double>(J * J - m * m) / ((2.0 * J + 1.0) * (2.0 * J - 1.0)));
}

double line_strength(Branch branch, int J_lower, int J_upper, int M) {
  switch (branch) {
    case Branch::Q:
      if (J_lower != J_upper) throw DomainError("Q branch requires equal J");
      return line_strength_Q(J_lower, M);
    case Branch::P:
      if (J_upper != J_lower - 1) throw DomainError("P branch requires J_upper = J_lower - 1");
      return line_strength_P(J_lower, M);
    case Branch::R: break;
  }
  throw UnsupportedBranch("R-branch line strengths are not available");
}

double rabi_frequency(double dipole_au, double line_strength, double field_V_m) {
  return dipole_au * constants::dipole_atomic_unit * line_strength * field_V_m / constants::hbar *
         1e-6;
}

ChannelSet build_channels(const CascadeSystem& sys, double mu_probe_au, double mu_coupling_au,
                          double probe_field_V_m, double coupling_field_V_m) {
  if (sys.probe_branch == Branch::R || sys.coupling_branch == Branch::R)
    throw UnsupportedBranch("R-branch line strengths are not available");
  ChannelSet out;
  for (int m = 0; m <= sys.J1; ++m) {
    if (m > sys.J2) continue;
    const double fp = line_strength(sys.probe_branch, sys.J1, sys.J2, m);
    if (fp == 0.0) continue;
    const double fc =
        m <= std::min(sys.J2, sys.J3) ? line_strength(sys.coupling_branch, sys.J2, sys.J3, m) : 0.0;
    SublevelChannel ch;
    ch.abs_m = m;
    ch.multiplicity = m == 0 ? 1 : 2;
    ch.f_probe = fp;
    ch.f_coupling = fc;
    ch.g1 = rabi_frequency(mu_probe_au, fp, probe_field_V_m);
    ch.g2 = rabi_frequency(mu_coupling_au, fc, coupling_field_V_m);
    out.push_back(ch);
  }
  return out;
}

int probe_coupling_count(const ChannelSet& channels) {
  int n = 0;
  for (const auto& ch : channels)
    if (ch.f_probe > 0.0) n += ch.multiplicity;
  return n;
}

int coupling_coupling_count(const ChannelSet& channels) {
  int n = 0;
  for (const auto& ch : channels)
    if (ch.f_coupling > 0.0) n += ch.multiplicity;
  return n;
}

}  // namespace eit
