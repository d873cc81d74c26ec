// eitsim: command-line front end for the cascade EIT engine.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "eit/config.hpp"
#include "eit/errors.hpp"
#include "eit/fitting.hpp"
#include "eit/liouville.hpp"
#include "eit/serialize.hpp"
#include "eit/spectrum.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, failure = 1, config_error = 2, numeric_error = 3, fit_error = 4 };

struct Options {
  std::string config;
  std::string data;
  std::string out;
  std::optional<std::string> engine;
  std::optional<unsigned> threads;
  bool json_errors = false;
};

// Raised after outputs are written when the fit did not converge.
struct FitNotConverged : eit::Error {
  using eit::Error::Error;
};

eit::RunConfig load(const Options& o) {
  if (o.config.empty()) throw eit::ConfigError("--config is required");
  eit::RunConfig cfg = eit::load_config(o.config);
  if (o.engine) cfg.scan.engine = *o.engine == "oracle" ? eit::Engine::oracle : eit::Engine::analytic;
  if (o.threads) cfg.scan.threads = *o.threads;
  return cfg;
}

fs::path output_dir(const Options& o, const eit::RunConfig& cfg) {
  fs::path dir = o.out.empty() ? fs::path(cfg.output_directory) : fs::path(o.out);
  fs::create_directories(dir);
  return dir;
}

int cmd_simulate(const Options& o) {
  const auto cfg = load(o);
  const auto spectrum = eit::simulate(cfg.model, cfg.scan);
  const fs::path dir = output_dir(o, cfg);
  const fs::path csv = dir / (cfg.output_stem + ".csv");
  const fs::path json = dir / (cfg.output_stem + ".json");
  eit::write_text_file(csv.string(), eit::spectrum_csv(spectrum));
  eit::write_text_file(json.string(), eit::spectrum_json(spectrum));
  std::printf("wrote %s (%zu points)\nwrote %s\n", csv.c_str(), spectrum.delta1_MHz.size(), json.c_str());
  return ok;
}

int cmd_components(const Options& o) {
  const auto cfg = load(o);
  const auto parts = eit::per_m_components(cfg.model, cfg.scan);
  const fs::path dir = output_dir(o, cfg);
  int nonzero = 0;
  for (const auto& s : parts) {
    std::string m = "?";
    for (const auto& [k, v] : s.metadata)
      if (k == "component.abs_m") m = v;
    const fs::path csv = dir / (cfg.output_stem + "_M" + m + ".csv");
    eit::write_text_file(csv.string(), eit::spectrum_csv(s));
    bool any = false;
    for (double v : s.rho33) any = any || v != 0.0;
    nonzero += any;
  }
  std::printf("wrote %zu components to %s (%d with nonzero rho33)\n", parts.size(), dir.c_str(), nonzero);
  return ok;
}

int cmd_fit(const Options& o) {
  const auto cfg = load(o);
  if (!cfg.fit) throw eit::ValidationError("fit", "config has no [fit] section");
  if (o.data.empty()) throw eit::ConfigError("--data is required for fit");
  const auto data = eit::load_spectrum(o.data, cfg.model.system.omega21_cm, cfg.fit->channel);

  eit::FitProblem fp;
  fp.target_delta1_MHz = data.delta1_MHz;
  fp.target_signal = data.signal;
  fp.channel = cfg.fit->channel;
  fp.free = cfg.fit->free;
  fp.model = cfg.model;
  fp.scan = cfg.scan;
  fp.amplitude_scale = cfg.fit->amplitude_scale;
  fp.baseline_offset = cfg.fit->baseline_offset;
  eit::FitOptions options;
  options.max_evaluations = cfg.fit->max_evaluations;
  const auto result = eit::fit(fp, cfg.fit->init, options);

  // Best-fit model on the data grid, both channels.
  eit::ScanConfig scan = cfg.scan;
  scan.delta1_MHz = data.delta1_MHz;
  scan.want_rho22 = scan.want_rho33 = true;
  auto best = eit::simulate(eit::apply_parameters(fp, result.best), scan);
  for (std::size_t i = 0; i < result.parameters.size(); ++i)
    best.metadata.emplace_back(std::string("fit.") + eit::to_string(result.parameters[i]),
                               eit::format_number(result.best[i]));
  best.metadata.insert(best.metadata.end(), data.metadata.begin(), data.metadata.end());

  const fs::path dir = output_dir(o, cfg);
  const fs::path report = dir / (cfg.output_stem + "_fit.json");
  const fs::path csv = dir / (cfg.output_stem + "_fit.csv");
  eit::write_text_file(report.string(), eit::fit_report_json(fp, result));
  eit::write_text_file(csv.string(), eit::spectrum_csv(best));
  for (std::size_t i = 0; i < result.parameters.size(); ++i)
    std::printf("%s = %s %s (curvature sensitivity %s)\n", eit::to_string(result.parameters[i]),
                eit::format_number(result.best[i]).c_str(), eit::unit_of(result.parameters[i]),
                eit::format_number(result.sensitivity[i]).c_str());
  std::printf("objective %s after %d evaluations, %s\nwrote %s\nwrote %s\n",
              eit::format_number(result.objective).c_str(), result.evaluations,
              result.converged ? "converged" : "NOT converged", report.c_str(), csv.c_str());
  if (!result.converged)
    throw FitNotConverged("fit did not converge within " + std::to_string(result.evaluations) + " evaluations");
  return ok;
}

int cmd_dip(const Options& o) {
  const auto cfg = load(o);
  const double x = eit::predict_dip_position(cfg.scan.delta2_MHz, cfg.model.system.omega21_cm,
                                             cfg.model.system.omega32_cm, cfg.scan.doppler_on);
  std::printf("%.1f MHz\n", x == 0.0 ? 0.0 : x);
  return ok;
}

int cmd_oracle_check(const Options& o) {
  const auto cfg = load(o);
  const auto& sys = cfg.model.system;
  const double g1 = 1e-3 * sys.gamma2;
  const auto grid = eit::standard_oracle_grid(sys);
  const auto cmp = eit::compare_with_analytic(sys, g1, grid);
  const double limit = 1e-4;
  std::printf("points %d\nmax_rel_dev_rho22 %.3e\nmax_rel_dev_rho33 %.3e\nmax_rel_dev %.3e (limit %.0e)\n%s\n",
              cmp.points, cmp.max_rel_dev_rho22, cmp.max_rel_dev_rho33, cmp.max_rel_dev(), limit,
              cmp.max_rel_dev() <= limit ? "PASS" : "FAIL");
  if (!(cmp.max_rel_dev() <= limit))
    throw eit::Error("analytic populations deviate from the steady-state solve by " +
                     eit::format_number(cmp.max_rel_dev()));
  return ok;
}

int report(const Options& o, int code, const char* kind, const std::exception& e,
           nlohmann::ordered_json extra = nlohmann::ordered_json::object()) {
  if (o.json_errors) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = e.what();
    j["exit_code"] = code;
    for (auto& [k, v] : extra.items()) j[k] = v;
    std::cerr << j.dump() << "\n";
  } else {
    std::cerr << "eitsim: " << kind << ": " << e.what() << "\n";
  }
  return code;
}

template <typename Fn>
int guarded(const Options& o, Fn&& fn) {
  try {
    return fn(o);
  } catch (const eit::ParseError& e) {
    return report(o, config_error, "parse_error", e, {{"line", e.line()}, {"column", e.column()}});
  } catch (const eit::ValidationError& e) {
    return report(o, config_error, "validation_error", e, {{"key", e.key()}});
  } catch (const eit::UnitError& e) {
    return report(o, config_error, "unit_error", e, {{"key", e.key()}});
  } catch (const eit::ConfigError& e) {
    return report(o, config_error, "config_error", e);
  } catch (const eit::DomainError& e) {
    return report(o, config_error, "domain_error", e);
  } catch (const FitNotConverged& e) {
    return report(o, fit_error, "fit_not_converged", e);
  } catch (const eit::QuadratureNotConverged& e) {
    return report(o, numeric_error, "quadrature_not_converged", e,
                  {{"deviation", e.deviation()}, {"allowed", e.allowed()}});
  } catch (const eit::SingularSystem& e) {
    return report(o, numeric_error, "singular_system", e);
  } catch (const eit::NoDipFound& e) {
    return report(o, numeric_error, "no_dip_found", e);
  } catch (const eit::FewerThanTwoPeaks& e) {
    return report(o, numeric_error, "fewer_than_two_peaks", e);
  } catch (const eit::Error& e) {
    // Oracle mismatch lands here too.
    return report(o, numeric_error, "numeric_error", e);
  } catch (const fs::filesystem_error& e) {
    return report(o, failure, "io_error", e);
  } catch (const std::exception& e) {
    return report(o, failure, "internal_error", e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state EIT and dark-fluorescence simulator for cascade molecular systems"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config, "Run configuration file");
  app.add_option("--data", opt.data, "Measured spectrum for fit");
  app.add_option("--out", opt.out, "Output directory (overrides [output] directory)");
  app.add_option("--engine", opt.engine, "Steady-state engine")
      ->check(CLI::IsMember({"analytic", "oracle"}));
  app.add_option("--threads", opt.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_flag("--json-errors", opt.json_errors, "Print errors as JSON on stderr");

  int (*handler)(const Options&) = nullptr;
  auto sub = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    app.add_subcommand(name, help)->fallthrough()->callback([&handler, fn] { handler = fn; });
  };
  sub("simulate", "Write the spectrum as CSV and JSON", cmd_simulate);
  sub("components", "Write one CSV per |M| component", cmd_components);
  sub("fit", "Fit the model to a measured spectrum", cmd_fit);
  sub("dip", "Print the predicted EIT dip position", cmd_dip);
  sub("oracle-check", "Compare the closed forms against the full steady-state solve", cmd_oracle_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (opt.json_errors) return report(opt, config_error, "usage_error", e);
    app.exit(e);
    return config_error;
  }
  return guarded(opt, handler);
}
