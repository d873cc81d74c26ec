#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eit/fitting.hpp"
#include "eit/spectrum.hpp"

namespace eit {

struct FitConfig {
  Channel channel = Channel::rho33;
  std::vector<FreeParameter> free;
  std::vector<double> init;
  double amplitude_scale = 1.0;
  double baseline_offset = 0.0;
  int max_evaluations = 2000;
};

/// Fully resolved run description, every quantity in canonical units.
struct RunConfig {
  Model model;
  ScanConfig scan;
  std::optional<FitConfig> fit;
  std::string output_directory = ".";
  std::string output_stem = "spectrum";
  std::string source;
};

/// Sectioned `key = value unit` text. Unknown sections or keys, missing
/// required keys, and physical values without a compatible unit are rejected
/// with ParseError, ValidationError or UnitError.
RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

enum class Abscissa { detuning_MHz, wavenumber_cm };

struct MeasuredSpectrum {
  std::vector<double> delta1_MHz;  // ascending
  std::vector<double> signal;
  std::vector<double> uncertainty;  // empty when the file has none
  Abscissa source_abscissa = Abscissa::detuning_MHz;
  bool resorted = false;
  Metadata metadata;
};

/// Two- or three-column text (comma or whitespace separated, `#` comments,
/// optional header row). Absolute wavenumbers are converted to probe detuning
/// with `resonance_wavenumber_cm`. When the header names rho22_au/rho33_au
/// columns, `column` picks one.
MeasuredSpectrum parse_spectrum(std::string_view text, const std::string& source,
                                std::optional<double> resonance_wavenumber_cm = std::nullopt,
                                std::optional<Channel> column = std::nullopt);
MeasuredSpectrum load_spectrum(const std::string& path,
                               std::optional<double> resonance_wavenumber_cm = std::nullopt,
                               std::optional<Channel> column = std::nullopt);

/// Reads a whole file; throws ConfigError if it cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace eit
