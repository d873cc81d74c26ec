#include <algorithm>
#include <cmath>
#include <numeric>

#include "eit/errors.hpp"
#include "eit/spectrum.hpp"

namespace eit {

namespace {

struct Vertex {
  double x;
  double y;
};

// Vertex of the parabola through three neighbouring samples centred on i.
Vertex parabolic_vertex(const std::vector<double>& x, const std::vector<double>& y, std::size_t i) {
  if (i == 0 || i + 1 >= x.size()) return {x[i], y[i]};
  const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
  const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
  const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
  const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  if (den == 0.0) return {x1, y1};
  const double xv = x1 - 0.5 * num / den;
  if (xv < x0 || xv > x2) return {x1, y1};
  // Lagrange form evaluated at the vertex.
  const double l0 = (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
  return {xv, y0 * l0 + y1 * l1 + y2 * l2};
}

struct Peak {
  std::size_t index;
  double prominence;
};

std::vector<Peak> find_peaks(const std::vector<double>& y, double floor) {
  const std::size_t n = y.size();
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1]) || y[i] <= floor) continue;
    // Lowest point on each side before reaching higher ground.
    double left_min = y[i];
    for (std::size_t j = i; j-- > 0;) {
      if (y[j] > y[i]) break;
      left_min = std::min(left_min, y[j]);
    }
    double right_min = y[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (y[j] > y[i]) break;
      right_min = std::min(right_min, y[j]);
    }
    const double prominence = y[i] - std::max(left_min, right_min);
    if (prominence > floor) peaks.push_back({i, prominence});
  }
  return peaks;
}

double crossing(double xa, double ya, double xb, double yb, double level) {
  if (yb == ya) return 0.5 * (xa + xb);
  return xa + (level - ya) * (xb - xa) / (yb - ya);
}

}  // namespace

double full_width_half_max(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) throw DomainError("need at least three samples");
  const auto top = std::max_element(y.begin(), y.end());
  const double half = 0.5 * *top;
  std::size_t lo = 0;
  while (lo < y.size() && y[lo] < half) ++lo;
  std::size_t hi = y.size() - 1;
  while (hi > 0 && y[hi] < half) --hi;
  const double xl = lo == 0 ? x.front() : crossing(x[lo - 1], y[lo - 1], x[lo], y[lo], half);
  const double xr = hi + 1 == y.size() ? x.back() : crossing(x[hi], y[hi], x[hi + 1], y[hi + 1], half);
  return xr - xl;
}

LineFeatures extract_features(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 5) throw DomainError("need at least five samples");
  const double ymax = *std::max_element(y.begin(), y.end());
  const double floor = 1e-6 * ymax;

  std::vector<Peak> peaks = find_peaks(y, floor);
  if (peaks.size() < 2) throw FewerThanTwoPeaks("found " + std::to_string(peaks.size()) + " peak(s)");

  LineFeatures f;
  for (const auto& p : peaks) f.peak_positions.push_back(parabolic_vertex(x, y, p.index).x);
  std::sort(f.peak_positions.begin(), f.peak_positions.end());

  // The two most prominent peaks bracket the dip.
  std::stable_sort(peaks.begin(), peaks.end(), [&](const Peak& a, const Peak& b) {
    if (a.prominence != b.prominence) return a.prominence > b.prominence;
    return y[a.index] > y[b.index];
  });
  std::size_t left = std::min(peaks[0].index, peaks[1].index);
  std::size_t right = std::max(peaks[0].index, peaks[1].index);
  if (right - left < 2) throw NoDipFound("main peaks are adjacent samples");

  std::size_t dip = left + 1;
  for (std::size_t i = left + 1; i < right; ++i)
    if (y[i] < y[dip]) dip = i;
  if (!(y[dip] < y[left] && y[dip] < y[right])) throw NoDipFound("no minimum between the main peaks");

  const Vertex pl = parabolic_vertex(x, y, left);
  const Vertex pr = parabolic_vertex(x, y, right);
  const Vertex d = parabolic_vertex(x, y, dip);
  f.dip_position = d.x;
  f.at_splitting = pr.x - pl.x;

  const double t = (d.x - pl.x) / (pr.x - pl.x);
  const double baseline = pl.y + t * (pr.y - pl.y);
  f.dip_depth_fraction = baseline > 0.0 ? std::clamp(1.0 - d.y / baseline, 0.0, 1.0) : 0.0;

  const double level = d.y + 0.5 * (baseline - d.y);
  std::size_t j = dip;
  while (j > left && y[j] < level) --j;
  const double xl = crossing(x[j], y[j], x[j + 1], y[j + 1], level);
  std::size_t k = dip;
  while (k < right && y[k] < level) ++k;
  const double xr = crossing(x[k - 1], y[k - 1], x[k], y[k], level);
  f.dip_width = xr - xl;

  f.fwhm = full_width_half_max(x, y);
  return f;
}

LineFeatures extract_features(const Spectrum& s, Channel channel) {
  return extract_features(s.delta1_MHz, s.signal(channel));
}

}  // namespace eit
