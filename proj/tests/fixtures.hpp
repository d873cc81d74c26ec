#pragma once

#include <string>

#include "eit/config.hpp"
#include "eit/three_level.hpp"
#include "eit/units.hpp"

#ifndef EIT_PRESET_DIR
#error "EIT_PRESET_DIR must be defined"
#endif

namespace fixtures {

// Li2 A-state / G-state cascade, rates in Mrad/s.
inline eit::CascadeSystem li2() {
  eit::CascadeSystem s;
  s.omega21_cm = 15642.636;
  s.omega32_cm = 17053.954;
  s.gamma2 = 1000.0 / 18.0;
  s.gamma3 = 1000.0 / 16.15;
  s.b2 = 0.1;
  s.b3 = 0.2;
  s.gamma12_c = eit::units::cyclic_MHz_to_angular(5.0);
  s.gamma13_c = eit::units::cyclic_MHz_to_angular(1.0);
  s.gamma23_c = eit::units::cyclic_MHz_to_angular(1.0);
  s.transit = eit::units::cyclic_MHz_to_angular(2.0);
  s.replenish = s.transit;
  s.J1 = 15;
  s.J2 = 14;
  s.J3 = 14;
  return s;
}

inline std::string preset_path(const std::string& name) {
  return std::string(EIT_PRESET_DIR) + "/" + name + ".cfg";
}

inline eit::RunConfig preset(const std::string& name) { return eit::load_config(preset_path(name)); }

}  // namespace fixtures
