#include "eit/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eit/errors.hpp"
#include "eit/fitting.hpp"
#include "eit/spectrum.hpp"

namespace eit {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "# eitsim spectrum\n";
  for (const auto& [key, value] : s.metadata) os << "# " << key << " = " << value << "\n";
  os << "delta1_MHz,rho22_au,rho33_au\n";
  for (std::size_t i = 0; i < s.delta1_MHz.size(); ++i) {
    os << format_number(s.delta1_MHz[i]) << ',' << format_number(s.rho22[i]) << ','
       << format_number(s.rho33[i]) << '\n';
  }
}

std::string spectrum_csv(const Spectrum& s) {
  std::ostringstream os;
  write_spectrum_csv(os, s);
  return os.str();
}

std::string spectrum_json(const Spectrum& s) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [key, value] : s.metadata) meta[key] = value;
  j["metadata"] = meta;
  j["columns"] = {"delta1_MHz", "rho22_au", "rho33_au"};
  j["delta1_MHz"] = s.delta1_MHz;
  j["rho22_au"] = s.rho22;
  j["rho33_au"] = s.rho33;
  return j.dump(2) + "\n";
}

std::string fit_report_json(const FitProblem& fp, const FitResult& r) {
  nlohmann::ordered_json j;
  j["channel"] = to_string(fp.channel);
  j["engine"] = to_string(fp.scan.engine);
  nlohmann::ordered_json params = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.parameters.size(); ++i) {
    nlohmann::ordered_json p;
    p["name"] = to_string(r.parameters[i]);
    p["value"] = r.best[i];
    p["unit"] = unit_of(r.parameters[i]);
    p["lower"] = fp.free[i].lower;
    p["upper"] = fp.free[i].upper;
    p["curvature"] = r.curvature[i];
    // Local curvature-based sensitivity, not a confidence interval.
    if (std::isfinite(r.sensitivity[i]))
      p["curvature_sensitivity"] = r.sensitivity[i];
    else
      p["curvature_sensitivity"] = nullptr;
    params.push_back(p);
  }
  j["parameters"] = params;
  j["objective"] = r.objective;
  j["initial_objective"] = r.initial_objective;
  j["residual_norm"] = r.residual_norm;
  j["points"] = fp.target_signal.size();
  j["evaluations"] = r.evaluations;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["trace"] = r.trace;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path);
}

}  // namespace eit
