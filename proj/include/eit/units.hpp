#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace eit {

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double speed_of_light = 299792458.0;           // m/s
inline constexpr double hbar = 1.054571817e-34;                  // J s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double boltzmann = 1.380649e-23;                // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;    // kg
inline constexpr double dipole_atomic_unit = 8.4783536e-30;      // C m (e a0)
// 1 cm^-1 expressed as a cyclic frequency in MHz.
inline constexpr double wavenumber_to_MHz = speed_of_light * 100.0 * 1e-6;
}  // namespace constants

namespace units {

enum class Unit {
  wavenumber_cm,
  frequency_MHz,
  angular_Mrad_s,
  time_ns,
  dipole_au,
  dipole_Cm,
  power_W,
  length_m,
  temperature_K,
  mass_amu,
  field_V_m,
};

enum class Dimension { frequency, time, dipole, power, length, temperature, mass, field };

struct Quantity {
  double value = 0.0;
  Unit unit = Unit::frequency_MHz;
};

Dimension dimension(Unit unit);
std::string_view symbol(Unit unit);
std::string_view name(Dimension dim);

/// Converts between units of the same dimension. Throws IncompatibleDimensions
/// otherwise.
Quantity convert(Quantity q, Unit target);

/// Peak on-axis field (V/m) of a Gaussian beam with 1/e^2 intensity radius `waist_m`.
double field_amplitude(double power_W, double waist_m);

/// Decay rate 1/tau in the canonical angular unit (Mrad/s) for a lifetime in ns.
double rate_from_lifetime(double lifetime_ns);

inline double cyclic_MHz_to_angular(double mhz) { return 2.0 * constants::pi * mhz; }
inline double angular_to_cyclic_MHz(double mrad_s) { return mrad_s / (2.0 * constants::pi); }

/// Result of parsing a unit suffix from a configuration value, e.g. "mW" or "um".
struct ParsedUnit {
  Unit unit;
  double scale;  // multiply the written value by this to express it in `unit`
};

/// Recognizes the enumerated unit symbols plus a few decimal prefixes
/// (mW, mm, um, GHz, kHz, us, ...). Returns nullopt for anything else.
std::optional<ParsedUnit> parse_unit(std::string_view text);

struct ConstantEntry {
  std::string_view name;
  double value;
  std::string_view unit;
  std::string_view description;
};

std::span<const ConstantEntry> constants_table();

/// Text rendering of the constants table, one `name value unit  # description`
/// line per entry. Shipped as data/constants.txt.
std::string constants_table_text();

}  // namespace units
}  // namespace eit
