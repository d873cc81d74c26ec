#include "eit/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "eit/errors.hpp"
#include "eit/units.hpp"

namespace eit {

namespace {

using units::Dimension;
using units::Unit;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
  int column = 0;
  bool used = false;
};

// Parsed but not yet interpreted file: section -> key -> entry.
class Document {
 public:
  Document(std::string_view text, std::string source) : source_(std::move(source)) {
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t nl = text.find('\n', pos);
      std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      const auto hash = raw.find('#');
      std::string_view line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
      if (line.empty()) continue;
      const int indent = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ParseError(source_, line_no, indent + static_cast<int>(line.size()),
                           "section header is missing ']'");
        current = std::string(trim(line.substr(1, line.size() - 2)));
        if (current.empty()) throw ParseError(source_, line_no, indent, "empty section name");
        sections_[current];
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(source_, line_no, indent, "expected 'key = value'");
      const std::string key(trim(line.substr(0, eq)));
      if (key.empty()) throw ParseError(source_, line_no, indent, "missing key before '='");
      if (current.empty()) throw ParseError(source_, line_no, indent, "key outside of any section");
      const std::string_view rest = line.substr(eq + 1);
      const std::string_view value = trim(rest);
      const int value_col = indent + static_cast<int>(eq + 1 + (rest.size() - trim(rest).size() > 0
                                                                  ? rest.find_first_not_of(" \t")
                                                                  : 0));
      auto& section = sections_[current];
      if (section.count(key)) throw ValidationError(current + "." + key, "duplicate key");
      section[key] = Entry{std::string(value), line_no, value_col, false};
    }
  }

  const std::string& source() const { return source_; }

  bool has_section(const std::string& s) const { return sections_.count(s) > 0; }

  Entry* find(const std::string& section, const std::string& key) {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }

  void reject_unknown(const std::vector<std::string>& known_sections) const {
    for (const auto& [name, keys] : sections_) {
      bool known = false;
      for (const auto& k : known_sections) known = known || k == name;
      if (!known) throw ValidationError(name, "unknown section");
      for (const auto& [key, entry] : keys)
        if (!entry.used) throw ValidationError(name + "." + key, "unknown key");
    }
  }

 private:
  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

class Reader {
 public:
  explicit Reader(Document& doc) : doc_(doc) {}

  bool present(const std::string& section, const std::string& key) {
    return doc_.find(section, key) != nullptr;
  }

  // Physical value converted to `target`.
  std::optional<double> quantity(const std::string& section, const std::string& key, Unit target) {
    Entry* e = doc_.find(section, key);
    if (!e) return std::nullopt;
    const std::string name = section + "." + key;
    std::string_view text = e->value;
    const auto space = text.find_first_of(" \t");
    if (space == std::string_view::npos)
      throw UnitError(name, "missing unit (expected " + std::string(units::name(units::dimension(target))) + ")");
    const double v = parse_number(*e, trim(text.substr(0, space)));
    const std::string unit_text(trim(text.substr(space)));
    const auto parsed = units::parse_unit(unit_text);
    if (!parsed) throw UnitError(name, "unknown unit '" + unit_text + "'");
    if (units::dimension(parsed->unit) != units::dimension(target))
      throw UnitError(name, "unit '" + unit_text + "' is not a " +
                                std::string(units::name(units::dimension(target))));
    return units::convert({v * parsed->scale, parsed->unit}, target).value;
  }

  double required_quantity(const std::string& section, const std::string& key, Unit target) {
    auto v = quantity(section, key, target);
    if (!v) throw ValidationError(section + "." + key, "required key is missing");
    return *v;
  }

  std::optional<double> number(const std::string& section, const std::string& key) {
    Entry* e = doc_.find(section, key);
    if (!e) return std::nullopt;
    std::string_view text = e->value;
    if (text.find_first_of(" \t") != std::string_view::npos)
      throw UnitError(section + "." + key, "dimensionless value must not carry a unit");
    return parse_number(*e, text);
  }

  double required_number(const std::string& section, const std::string& key) {
    auto v = number(section, key);
    if (!v) throw ValidationError(section + "." + key, "required key is missing");
    return *v;
  }

  std::optional<int> integer(const std::string& section, const std::string& key) {
    Entry* e = doc_.find(section, key);
    if (!e) return std::nullopt;
    int v = 0;
    const auto* first = e->value.data();
    const auto* last = first + e->value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
      throw ParseError(doc_.source(), e->line, e->column, "expected an integer for " + section + "." + key);
    return v;
  }

  int required_integer(const std::string& section, const std::string& key) {
    auto v = integer(section, key);
    if (!v) throw ValidationError(section + "." + key, "required key is missing");
    return *v;
  }

  std::optional<std::string> word(const std::string& section, const std::string& key) {
    Entry* e = doc_.find(section, key);
    if (!e) return std::nullopt;
    return e->value;
  }

  std::vector<std::string> words(const std::string& section, const std::string& key) {
    std::vector<std::string> out;
    auto w = word(section, key);
    if (!w) return out;
    std::string token;
    for (char c : *w) {
      if (c == ',' || c == ' ' || c == '\t') {
        if (!token.empty()) out.push_back(token);
        token.clear();
      } else {
        token += c;
      }
    }
    if (!token.empty()) out.push_back(token);
    return out;
  }

  template <typename T>
  T choice(const std::string& section, const std::string& key, T fallback,
           std::initializer_list<std::pair<const char*, T>> options) {
    auto w = word(section, key);
    if (!w) return fallback;
    for (const auto& [text, value] : options)
      if (*w == text) return value;
    std::string allowed;
    for (const auto& [text, value] : options) allowed += std::string(allowed.empty() ? "" : ", ") + text;
    throw ValidationError(section + "." + key, "'" + *w + "' is not one of " + allowed);
  }

 private:
  double parse_number(const Entry& e, std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
      throw ParseError(doc_.source(), e.line, e.column, "expected a number, got '" + std::string(text) + "'");
    return v;
  }

  Document& doc_;
};

Branch parse_branch(Reader& r, const std::string& key) {
  auto w = r.word("system", key);
  if (!w) throw ValidationError("system." + key, "required key is missing");
  if (*w == "P") return Branch::P;
  if (*w == "Q") return Branch::Q;
  if (*w == "R") return Branch::R;
  throw ValidationError("system." + key, "branch must be P, Q or R");
}

double rate(Reader& r, const std::string& rate_key, const std::string& lifetime_key) {
  const bool has_rate = r.present("system", rate_key);
  const bool has_lifetime = r.present("system", lifetime_key);
  if (has_rate && has_lifetime)
    throw ValidationError("system." + rate_key, "give either " + rate_key + " or " + lifetime_key + ", not both");
  if (has_lifetime) return units::rate_from_lifetime(r.required_quantity("system", lifetime_key, Unit::time_ns));
  if (has_rate) return r.required_quantity("system", rate_key, Unit::angular_Mrad_s);
  throw ValidationError("system." + lifetime_key, "required key is missing");
}

void read_system(Reader& r, RunConfig& cfg) {
  CascadeSystem& s = cfg.model.system;
  s.omega21_cm = r.required_quantity("system", "omega21", Unit::wavenumber_cm);
  s.omega32_cm = r.required_quantity("system", "omega32", Unit::wavenumber_cm);
  s.gamma2 = rate(r, "gamma2", "tau2");
  s.gamma3 = rate(r, "gamma3", "tau3");
  s.b2 = r.required_number("system", "b2");
  s.b3 = r.required_number("system", "b3");
  s.gamma12_c = r.quantity("system", "gamma12_c", Unit::angular_Mrad_s).value_or(0.0);
  s.gamma13_c = r.quantity("system", "gamma13_c", Unit::angular_Mrad_s).value_or(0.0);
  s.gamma23_c = r.quantity("system", "gamma23_c", Unit::angular_Mrad_s).value_or(0.0);
  s.transit = r.required_quantity("system", "transit", Unit::angular_Mrad_s);
  s.replenish = r.quantity("system", "replenish", Unit::angular_Mrad_s).value_or(s.transit);
  s.J1 = r.required_integer("system", "J1");
  s.J2 = r.required_integer("system", "J2");
  s.J3 = r.required_integer("system", "J3");
  s.probe_branch = parse_branch(r, "probe_branch");
  s.coupling_branch = parse_branch(r, "coupling_branch");
  cfg.model.dipoles.probe_au = r.required_quantity("system", "mu_probe", Unit::dipole_au);
  cfg.model.dipoles.coupling_au = r.required_quantity("system", "mu_coupling", Unit::dipole_au);
  if (!(s.transit > 0.0)) throw ValidationError("system.transit", "must be positive");
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ValidationError("system", e.what());
  }
}

void read_lasers(Reader& r, RunConfig& cfg) {
  LaserPair& l = cfg.model.lasers;
  l.probe_power_W = r.required_quantity("lasers", "probe_power", Unit::power_W);
  l.probe_waist_m = r.required_quantity("lasers", "probe_waist", Unit::length_m);
  l.coupling_power_W = r.required_quantity("lasers", "coupling_power", Unit::power_W);
  l.coupling_waist_m = r.required_quantity("lasers", "coupling_waist", Unit::length_m);
  l.geometry = r.choice("lasers", "geometry", Geometry::counter_propagating,
                        {{"counter_propagating", Geometry::counter_propagating},
                         {"co_propagating", Geometry::co_propagating}});
  cfg.scan.delta2_MHz = r.quantity("lasers", "delta2", Unit::frequency_MHz).value_or(0.0);
  if (l.probe_power_W < 0.0) throw ValidationError("lasers.probe_power", "must be non-negative");
  if (l.coupling_power_W < 0.0) throw ValidationError("lasers.coupling_power", "must be non-negative");
  if (!(l.probe_waist_m > 0.0)) throw ValidationError("lasers.probe_waist", "must be positive");
  if (!(l.coupling_waist_m > 0.0)) throw ValidationError("lasers.coupling_waist", "must be positive");
}

void read_ensemble(Reader& r, RunConfig& cfg) {
  const bool by_width = r.present("ensemble", "doppler_fwhm");
  const bool by_temperature = r.present("ensemble", "temperature");
  if (by_width && by_temperature)
    throw ValidationError("ensemble.doppler_fwhm", "give either temperature and mass or doppler_fwhm");
  if (by_width) {
    const double fwhm = r.required_quantity("ensemble", "doppler_fwhm", Unit::frequency_MHz);
    if (!(fwhm > 0.0)) throw ValidationError("ensemble.doppler_fwhm", "must be positive");
    cfg.model.ensemble = Ensemble::from_doppler_fwhm(fwhm, cfg.model.system.omega21_cm);
    if (auto m = r.quantity("ensemble", "mass", Unit::mass_amu)) cfg.model.ensemble.mass_amu = *m;
    return;
  }
  const double t = r.required_quantity("ensemble", "temperature", Unit::temperature_K);
  const double m = r.required_quantity("ensemble", "mass", Unit::mass_amu);
  if (!(t > 0.0)) throw ValidationError("ensemble.temperature", "must be positive");
  if (!(m > 0.0)) throw ValidationError("ensemble.mass", "must be positive");
  cfg.model.ensemble = Ensemble::from_temperature(t, m);
}

void read_scan(Reader& r, RunConfig& cfg) {
  ScanConfig& s = cfg.scan;
  const double lo = r.quantity("scan", "delta1_min", Unit::frequency_MHz).value_or(-3000.0);
  const double hi = r.quantity("scan", "delta1_max", Unit::frequency_MHz).value_or(3000.0);
  const int points = r.integer("scan", "points").value_or(801);
  if (points < 2) throw ValidationError("scan.points", "must be at least 2");
  if (!(hi > lo)) throw ValidationError("scan.delta1_max", "must exceed delta1_min");
  s.delta1_MHz = linear_grid(lo, hi, points);
  const auto channels = r.words("scan", "channels");
  if (!channels.empty()) {
    s.want_rho22 = s.want_rho33 = false;
    for (const auto& c : channels) {
      if (c == "rho22")
        s.want_rho22 = true;
      else if (c == "rho33")
        s.want_rho33 = true;
      else
        throw ValidationError("scan.channels", "unknown channel '" + c + "'");
    }
  }
  s.doppler_on = r.choice("scan", "doppler", true, {{"on", true}, {"off", false}});
  s.m_sum_on = r.choice("scan", "m_sum", true, {{"on", true}, {"off", false}});
  if (auto m = r.integer("scan", "abs_m")) s.only_abs_m = *m;
  s.engine = r.choice("scan", "engine", Engine::analytic,
                      {{"analytic", Engine::analytic}, {"oracle", Engine::oracle}});
}

void read_quadrature(Reader& r, RunConfig& cfg) {
  QuadratureSpec& q = cfg.model.quadrature;
  q.scheme = r.choice("quadrature", "scheme", QuadratureScheme::uniform_trapezoid,
                      {{"trapezoid", QuadratureScheme::uniform_trapezoid},
                       {"gauss_hermite", QuadratureScheme::gauss_hermite}});
  q.node_count = r.integer("quadrature", "nodes").value_or(q.node_count);
  q.span = r.number("quadrature", "span").value_or(q.span);
  q.refinement_tolerance = r.number("quadrature", "tolerance").value_or(q.refinement_tolerance);
  try {
    q.validate();
  } catch (const DomainError& e) {
    throw ValidationError("quadrature", e.what());
  }
}

// Value of a fit parameter in its reporting unit.
std::optional<double> fit_value(Reader& r, FitParameter id, const std::string& key) {
  switch (id) {
    case FitParameter::mu_coupling: return r.quantity("fit", key, Unit::dipole_au);
    case FitParameter::gamma12_c:
    case FitParameter::gamma13_c:
    case FitParameter::gamma23_c: return r.quantity("fit", key, Unit::frequency_MHz);
    case FitParameter::amplitude_scale:
    case FitParameter::baseline_offset: return r.number("fit", key);
  }
  return std::nullopt;
}

void read_fit(Reader& r, RunConfig& cfg, bool present) {
  if (!present) return;
  FitConfig f;
  f.channel = r.choice("fit", "channel", Channel::rho33,
                       {{"rho22", Channel::rho22}, {"rho33", Channel::rho33}});
  const auto names = r.words("fit", "free");
  if (names.empty()) throw ValidationError("fit.free", "required key is missing");
  for (const auto& name : names) {
    const auto id = parse_fit_parameter(name);
    if (!id) throw ValidationError("fit.free", "unknown parameter '" + name + "'");
    const auto init = fit_value(r, *id, name);
    const auto lo = fit_value(r, *id, name + "_min");
    const auto hi = fit_value(r, *id, name + "_max");
    if (!init) throw ValidationError("fit." + name, "required key is missing");
    if (!lo) throw ValidationError("fit." + name + "_min", "required key is missing");
    if (!hi) throw ValidationError("fit." + name + "_max", "required key is missing");
    if (!(*hi > *lo)) throw ValidationError("fit." + name + "_max", "must exceed the lower bound");
    if (*init < *lo || *init > *hi) throw ValidationError("fit." + name, "initial value outside bounds");
    f.free.push_back({*id, *lo, *hi});
    f.init.push_back(*init);
  }
  // Held values for scale and offset when they are not free.
  if (auto s = r.number("fit", "amplitude_scale")) f.amplitude_scale = *s;
  if (auto o = r.number("fit", "baseline_offset")) f.baseline_offset = *o;
  f.max_evaluations = r.integer("fit", "max_evaluations").value_or(f.max_evaluations);
  if (f.max_evaluations < 1) throw ValidationError("fit.max_evaluations", "must be positive");
  cfg.fit = f;
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::string& source) {
  Document doc(text, source);
  Reader r(doc);
  RunConfig cfg;
  cfg.source = source;
  for (const char* s : {"system", "lasers", "ensemble"})
    if (!doc.has_section(s)) throw ValidationError(s, "required section is missing");
  read_system(r, cfg);
  read_lasers(r, cfg);
  read_ensemble(r, cfg);
  read_scan(r, cfg);
  read_quadrature(r, cfg);
  read_fit(r, cfg, doc.has_section("fit"));
  if (auto d = r.word("output", "directory")) cfg.output_directory = *d;
  if (auto s = r.word("output", "stem")) cfg.output_stem = *s;
  doc.reject_unknown({"system", "lasers", "ensemble", "scan", "quadrature", "fit", "output"});
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig load_config(const std::string& path) { return parse_config(read_text_file(path), path); }

}  // namespace eit
