#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eit/spectrum.hpp"

namespace eit {

enum class FitParameter {
  mu_coupling,      // au
  gamma12_c,        // MHz (cyclic)
  gamma13_c,        // MHz (cyclic)
  gamma23_c,        // MHz (cyclic)
  amplitude_scale,  // dimensionless
  baseline_offset,  // signal units
};

const char* to_string(FitParameter p);
const char* unit_of(FitParameter p);
std::optional<FitParameter> parse_fit_parameter(std::string_view name);

struct FreeParameter {
  FitParameter id;
  double lower;
  double upper;
};

struct FitProblem {
  std::vector<double> target_delta1_MHz;
  std::vector<double> target_signal;
  Channel channel = Channel::rho33;
  std::vector<FreeParameter> free;
  Model model;
  /// Engine, Doppler and |M| switches, coupling detuning and threads. The
  /// probe grid is taken from the target.
  ScanConfig scan;
  // Values used while these are held fixed.
  double amplitude_scale = 1.0;
  double baseline_offset = 0.0;

  void validate() const;
};

struct FitOptions {
  int max_evaluations = 2000;
  double simplex_tolerance = 1e-4;      // diameter, relative to each bound range
  double improvement_tolerance = 1e-8;  // relative objective decrease
  int improvement_window = 20;          // iterations
  double initial_step = 0.1;            // fraction of each bound range
};

struct FitResult {
  std::vector<FitParameter> parameters;
  std::vector<double> best;
  double objective = 0.0;
  double initial_objective = 0.0;
  double residual_norm = 0.0;  // sqrt(objective)
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
  /// Second derivative of the objective along each parameter at the optimum.
  std::vector<double> curvature;
  /// Local 1-sigma sensitivity sqrt(2 s^2 / curvature), s^2 = objective / (N - k).
  std::vector<double> sensitivity;
  /// Best objective after each iteration.
  std::vector<double> trace;

  double value(FitParameter p) const;
};

/// The model with the free parameters set from `p` (one entry per free parameter).
Model apply_parameters(const FitProblem& fp, std::span<const double> p);

/// Simulated signal on the target grid for parameters `p`, before scale and offset.
std::vector<double> model_signal(const FitProblem& fp, std::span<const double> p);

/// Sum of squared residuals of scale * model + offset against the target.
double objective(std::span<const double> p, const FitProblem& fp);

/// Bounded Nelder-Mead search. A result that hit the evaluation cap is
/// returned with converged = false.
FitResult fit(const FitProblem& fp, std::span<const double> init, const FitOptions& options = {});

/// Multiplies each sample by (1 + relative * N(0, 1)) from a fixed-seed generator.
std::vector<double> add_multiplicative_noise(std::span<const double> signal, double relative,
                                             std::uint64_t seed);

}  // namespace eit
