#include "eit/units.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "eit/errors.hpp"

namespace eit::units {

namespace {

// Factor that takes a value in `unit` to the base unit of its dimension.
// Bases: MHz (frequency), ns, C m, W, m, K, amu, V/m.
double to_base(Unit unit) {
  switch (unit) {
    case Unit::wavenumber_cm: return constants::wavenumber_to_MHz;
    case Unit::frequency_MHz: return 1.0;
    case Unit::angular_Mrad_s: return 1.0 / (2.0 * constants::pi);
    case Unit::dipole_au: return constants::dipole_atomic_unit;
    case Unit::dipole_Cm: return 1.0;
    case Unit::time_ns:
    case Unit::power_W:
    case Unit::length_m:
    case Unit::temperature_K:
    case Unit::mass_amu:
    case Unit::field_V_m: return 1.0;
  }
  return 1.0;
}

constexpr std::array<ConstantEntry, 8> kConstants{{
    {"speed_of_light", constants::speed_of_light, "m/s", "exact SI value"},
    {"hbar", constants::hbar, "J*s", "reduced Planck constant, CODATA 2018"},
    {"vacuum_permittivity", constants::vacuum_permittivity, "F/m", "CODATA 2018"},
    {"boltzmann", constants::boltzmann, "J/K", "exact SI value"},
    {"atomic_mass_unit", constants::atomic_mass_unit, "kg", "CODATA 2018"},
    {"dipole_atomic_unit", constants::dipole_atomic_unit, "C*m", "e*a0"},
    {"wavenumber_to_MHz", constants::wavenumber_to_MHz, "MHz/cm-1", "c * 100 cm/m * 1e-6"},
    {"pi", constants::pi, "1", "circle constant"},
}};

}  // namespace

Dimension dimension(Unit unit) {
  switch (unit) {
    case Unit::wavenumber_cm:
    case Unit::frequency_MHz:
    case Unit::angular_Mrad_s: return Dimension::frequency;
    case Unit::time_ns: return Dimension::time;
    case Unit::dipole_au:
    case Unit::dipole_Cm: return Dimension::dipole;
    case Unit::power_W: return Dimension::power;
    case Unit::length_m: return Dimension::length;
    case Unit::temperature_K: return Dimension::temperature;
    case Unit::mass_amu: return Dimension::mass;
    case Unit::field_V_m: return Dimension::field;
  }
  return Dimension::frequency;
}

std::string_view symbol(Unit unit) {
  switch (unit) {
    case Unit::wavenumber_cm: return "cm-1";
    case Unit::frequency_MHz: return "MHz";
    case Unit::angular_Mrad_s: return "Mrad/s";
    case Unit::time_ns: return "ns";
    case Unit::dipole_au: return "au";
    case Unit::dipole_Cm: return "C*m";
    case Unit::power_W: return "W";
    case Unit::length_m: return "m";
    case Unit::temperature_K: return "K";
    case Unit::mass_amu: return "amu";
    case Unit::field_V_m: return "V/m";
  }
  return "?";
}

std::string_view name(Dimension dim) {
  switch (dim) {
    case Dimension::frequency: return "frequency";
    case Dimension::time: return "time";
    case Dimension::dipole: return "dipole";
    case Dimension::power: return "power";
    case Dimension::length: return "length";
    case Dimension::temperature: return "temperature";
    case Dimension::mass: return "mass";
    case Dimension::field: return "field";
  }
  return "?";
}

Quantity convert(Quantity q, Unit target) {
  if (dimension(q.unit) != dimension(target)) {
    throw IncompatibleDimensions("cannot convert " + std::string(symbol(q.unit)) + " (" +
                                 std::string(name(dimension(q.unit))) + ") to " +
                                 std::string(symbol(target)) + " (" +
                                 std::string(name(dimension(target))) + ")");
  }
  if (q.unit == target) return q;
  return {q.value * to_base(q.unit) / to_base(target), target};
}

double field_amplitude(double power_W, double waist_m) {
  if (!(waist_m > 0.0)) throw NonPositiveWaist("beam waist must be positive");
  if (!(power_W >= 0.0)) throw DomainError("beam power must be non-negative");
  const double intensity = 2.0 * power_W / (constants::pi * waist_m * waist_m);
  return std::sqrt(2.0 * intensity / (constants::vacuum_permittivity * constants::speed_of_light));
}

double rate_from_lifetime(double lifetime_ns) {
  if (!(lifetime_ns > 0.0)) throw DomainError("lifetime must be positive");
  // 1/ns = 1e3 /us, and the canonical unit is rad per microsecond.
  return 1e3 / lifetime_ns;
}

std::optional<ParsedUnit> parse_unit(std::string_view text) {
  struct Entry {
    std::string_view text;
    Unit unit;
    double scale;
  };
  static constexpr std::array<Entry, 21> kTable{{
      {"cm-1", Unit::wavenumber_cm, 1.0},
      {"MHz", Unit::frequency_MHz, 1.0},
      {"GHz", Unit::frequency_MHz, 1e3},
      {"kHz", Unit::frequency_MHz, 1e-3},
      {"Mrad/s", Unit::angular_Mrad_s, 1.0},
      {"ns", Unit::time_ns, 1.0},
      {"us", Unit::time_ns, 1e3},
      {"ps", Unit::time_ns, 1e-3},
      {"au", Unit::dipole_au, 1.0},
      {"C*m", Unit::dipole_Cm, 1.0},
      {"D", Unit::dipole_Cm, 3.33564095198152e-30},
      {"W", Unit::power_W, 1.0},
      {"mW", Unit::power_W, 1e-3},
      {"uW", Unit::power_W, 1e-6},
      {"m", Unit::length_m, 1.0},
      {"mm", Unit::length_m, 1e-3},
      {"um", Unit::length_m, 1e-6},
      {"K", Unit::temperature_K, 1.0},
      {"amu", Unit::mass_amu, 1.0},
      {"V/m", Unit::field_V_m, 1.0},
      {"cm", Unit::length_m, 1e-2},
  }};
  for (const auto& e : kTable) {
    if (e.text == text) return ParsedUnit{e.unit, e.scale};
  }
  return std::nullopt;
}

std::span<const ConstantEntry> constants_table() { return kConstants; }

std::string constants_table_text() {
  std::string out = "# name value unit  # note\n";
  char buf[64];
  for (const auto& c : kConstants) {
    std::snprintf(buf, sizeof buf, "%.12g", c.value);
    out += std::string(c.name) + " " + buf + " " + std::string(c.unit) + "  # " +
           std::string(c.description) + "\n";
  }
  return out;
}

}  // namespace eit::units
