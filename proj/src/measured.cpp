#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "eit/config.hpp"
#include "eit/errors.hpp"
#include "eit/serialize.hpp"
#include "eit/units.hpp"

namespace eit {

namespace {

struct Token {
  std::string text;
  int column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ',' && line[i] != '\r') ++i;
    out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
  }
  return out;
}

std::optional<double> to_number(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

int find_column(const std::vector<std::string>& header, std::initializer_list<const char*> names) {
  for (const char* n : names)
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == n) return static_cast<int>(i);
  return -1;
}

}  // namespace

MeasuredSpectrum parse_spectrum(std::string_view text, const std::string& source,
                                std::optional<double> resonance_wavenumber_cm,
                                std::optional<Channel> column) {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  int line_no = 0;
  std::size_t pos = 0;
  std::size_t width = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (header.empty() && rows.empty() && !to_number(tokens[0].text)) {
      for (const auto& t : tokens) header.push_back(t.text);
      width = header.size();
      continue;
    }
    if (width == 0) width = tokens.size();
    if (tokens.size() != width)
      throw ParseError(source, line_no, tokens.front().column,
                       "expected " + std::to_string(width) + " columns, found " + std::to_string(tokens.size()));
    std::vector<double> row;
    for (const auto& t : tokens) {
      const auto v = to_number(t.text);
      if (!v || !std::isfinite(*v)) throw ParseError(source, line_no, t.column, "not a finite number: '" + t.text + "'");
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(source, "no data rows");
  if (width < 2) throw ValidationError(source, "need at least an abscissa and a signal column");

  MeasuredSpectrum out;
  int xcol = 0, ycol = 1, ucol = width >= 3 ? 2 : -1;
  bool wavenumber = false;
  if (!header.empty()) {
    xcol = find_column(header, {"delta1_MHz", "detuning_MHz"});
    if (xcol < 0) {
      xcol = find_column(header, {"wavenumber_cm-1", "wavenumber_cm"});
      wavenumber = xcol >= 0;
    }
    if (xcol < 0) throw ValidationError(source, "no abscissa column (delta1_MHz or wavenumber_cm-1)");
    ycol = -1;
    if (column) ycol = find_column(header, {*column == Channel::rho22 ? "rho22_au" : "rho33_au"});
    if (ycol < 0) ycol = find_column(header, {"signal", "fluorescence", "rho33_au", "rho22_au"});
    if (ycol < 0) throw ValidationError(source, "no signal column");
    ucol = find_column(header, {"uncertainty", "sigma"});
  }

  std::vector<double> x, y, u;
  for (const auto& r : rows) {
    x.push_back(r[xcol]);
    y.push_back(r[ycol]);
    if (ucol >= 0) u.push_back(r[ucol]);
  }
  if (wavenumber) {
    if (!resonance_wavenumber_cm)
      throw ValidationError(source, "wavenumber abscissa needs the probe resonance wavenumber");
    for (double& v : x) v = (v - *resonance_wavenumber_cm) * constants::wavenumber_to_MHz;
    out.source_abscissa = Abscissa::wavenumber_cm;
    out.metadata.emplace_back("abscissa", "wavenumber_cm-1");
    out.metadata.emplace_back("resonance_wavenumber_cm-1", format_number(*resonance_wavenumber_cm));
  } else {
    out.metadata.emplace_back("abscissa", "delta1_MHz");
  }

  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] != i) out.resorted = true;
    if (i > 0 && x[order[i]] == x[order[i - 1]])
      throw ValidationError(source, "duplicate abscissa " + format_number(x[order[i]]));
    out.delta1_MHz.push_back(x[order[i]]);
    out.signal.push_back(y[order[i]]);
    if (!u.empty()) out.uncertainty.push_back(u[order[i]]);
  }
  out.metadata.emplace_back("points", std::to_string(out.delta1_MHz.size()));
  out.metadata.emplace_back("resorted", out.resorted ? "yes" : "no");
  return out;
}

MeasuredSpectrum load_spectrum(const std::string& path, std::optional<double> resonance_wavenumber_cm,
                               std::optional<Channel> column) {
  return parse_spectrum(read_text_file(path), path, resonance_wavenumber_cm, column);
}

}  // namespace eit
