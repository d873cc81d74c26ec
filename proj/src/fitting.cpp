#include "eit/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "eit/errors.hpp"
#include "eit/units.hpp"

namespace eit {

namespace {

constexpr std::array<std::pair<FitParameter, const char*>, 6> kNames{{
    {FitParameter::mu_coupling, "mu_coupling"},
    {FitParameter::gamma12_c, "gamma12_c"},
    {FitParameter::gamma13_c, "gamma13_c"},
    {FitParameter::gamma23_c, "gamma23_c"},
    {FitParameter::amplitude_scale, "amplitude_scale"},
    {FitParameter::baseline_offset, "baseline_offset"},
}};

struct Vertex {
  std::vector<double> u;  // normalized coordinates in [0, 1]
  double f;
};

class Search {
 public:
  Search(const FitProblem& fp, const FitOptions& opt) : fp_(fp), opt_(opt) {}

  std::vector<double> to_physical(const std::vector<double>& u) const {
    std::vector<double> p(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const auto& b = fp_.free[i];
      p[i] = b.lower + std::clamp(u[i], 0.0, 1.0) * (b.upper - b.lower);
    }
    return p;
  }

  double evaluate(std::vector<double>& u) {
    for (double& x : u) x = std::clamp(x, 0.0, 1.0);
    ++evaluations_;
    return objective(to_physical(u), fp_);
  }

  int evaluations() const { return evaluations_; }
  bool exhausted() const { return evaluations_ >= opt_.max_evaluations; }

 private:
  const FitProblem& fp_;
  const FitOptions& opt_;
  int evaluations_ = 0;
};

std::vector<double> combine(const std::vector<double>& a, const std::vector<double>& b, double t) {
  // a + t (b - a)
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

}  // namespace

const char* to_string(FitParameter p) {
  for (const auto& [id, name] : kNames)
    if (id == p) return name;
  return "?";
}

const char* unit_of(FitParameter p) {
  switch (p) {
    case FitParameter::mu_coupling: return "au";
    case FitParameter::gamma12_c:
    case FitParameter::gamma13_c:
    case FitParameter::gamma23_c: return "MHz";
    case FitParameter::amplitude_scale: return "1";
    case FitParameter::baseline_offset: return "signal";
  }
  return "?";
}

std::optional<FitParameter> parse_fit_parameter(std::string_view name) {
  for (const auto& [id, n] : kNames)
    if (name == n) return id;
  return std::nullopt;
}

double FitResult::value(FitParameter p) const {
  for (std::size_t i = 0; i < parameters.size(); ++i)
    if (parameters[i] == p) return best[i];
  throw DomainError(std::string("parameter ") + to_string(p) + " was not fitted");
}

void FitProblem::validate() const {
  if (free.empty()) throw DomainError("at least one free parameter is required");
  if (target_delta1_MHz.size() != target_signal.size() || target_signal.empty())
    throw DomainError("target abscissa and signal must be non-empty and congruent");
  for (std::size_t i = 0; i < free.size(); ++i) {
    const auto& b = free[i];
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || !(b.upper > b.lower))
      throw DomainError(std::string("bounds of ") + to_string(b.id) + " must be finite and ordered");
    for (std::size_t j = 0; j < i; ++j)
      if (free[j].id == b.id) throw DomainError(std::string("duplicate parameter ") + to_string(b.id));
  }
  for (double v : target_signal)
    if (!std::isfinite(v)) throw DomainError("target signal must be finite");
}

Model apply_parameters(const FitProblem& fp, std::span<const double> p) {
  if (p.size() != fp.free.size()) throw DomainError("parameter vector size does not match free list");
  Model m = fp.model;
  for (std::size_t i = 0; i < p.size(); ++i) {
    switch (fp.free[i].id) {
      case FitParameter::mu_coupling: m.dipoles.coupling_au = p[i]; break;
      case FitParameter::gamma12_c: m.system.gamma12_c = units::cyclic_MHz_to_angular(p[i]); break;
      case FitParameter::gamma13_c: m.system.gamma13_c = units::cyclic_MHz_to_angular(p[i]); break;
      case FitParameter::gamma23_c: m.system.gamma23_c = units::cyclic_MHz_to_angular(p[i]); break;
      case FitParameter::amplitude_scale:
      case FitParameter::baseline_offset: break;
    }
  }
  return m;
}

std::vector<double> model_signal(const FitProblem& fp, std::span<const double> p) {
  const Model m = apply_parameters(fp, p);
  ScanConfig scan = fp.scan;
  scan.delta1_MHz = fp.target_delta1_MHz;
  scan.want_rho22 = fp.channel == Channel::rho22;
  scan.want_rho33 = fp.channel == Channel::rho33;
  return simulate(m, scan).signal(fp.channel);
}

double objective(std::span<const double> p, const FitProblem& fp) {
  double scale = fp.amplitude_scale;
  double offset = fp.baseline_offset;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& b = fp.free[i];
    if (p[i] < b.lower || p[i] > b.upper)
      throw DomainError(std::string(to_string(b.id)) + " outside its bounds");
    if (b.id == FitParameter::amplitude_scale) scale = p[i];
    if (b.id == FitParameter::baseline_offset) offset = p[i];
  }
  const std::vector<double> sim = model_signal(fp, p);
  CompensatedSum total;
  for (std::size_t i = 0; i < sim.size(); ++i) {
    const double r = scale * sim[i] + offset - fp.target_signal[i];
    total.add(r * r);
  }
  return total.value();
}

FitResult fit(const FitProblem& fp, std::span<const double> init, const FitOptions& options) {
  fp.validate();
  const std::size_t n = fp.free.size();
  if (init.size() != n) throw DomainError("initial vector size does not match free list");

  Search search(fp, options);
  std::vector<double> u0(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = fp.free[i];
    if (init[i] < b.lower || init[i] > b.upper)
      throw DomainError(std::string("initial ") + to_string(b.id) + " outside its bounds");
    u0[i] = (init[i] - b.lower) / (b.upper - b.lower);
  }

  std::vector<Vertex> simplex;
  simplex.push_back({u0, search.evaluate(u0)});
  const double initial_objective = simplex[0].f;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> u = u0;
    u[i] += (u[i] + options.initial_step <= 1.0) ? options.initial_step : -options.initial_step;
    const double f = search.evaluate(u);
    simplex.push_back({u, f});
  }

  FitResult result;
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  int iteration = 0;
  bool converged = false;
  while (true) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    result.trace.push_back(simplex.front().f);

    double diameter = 0.0;
    for (std::size_t v = 1; v <= n; ++v)
      for (std::size_t i = 0; i < n; ++i)
        diameter = std::max(diameter, std::abs(simplex[v].u[i] - simplex[0].u[i]));
    bool stalled = false;
    const int window = options.improvement_window;
    if (iteration >= window) {
      const double before = result.trace[result.trace.size() - 1 - window];
      const double now = simplex.front().f;
      stalled = (before - now) <= options.improvement_tolerance * std::abs(before);
    }
    if ((diameter < options.simplex_tolerance && stalled) || diameter < 1e-12) {
      converged = true;
      break;
    }
    if (search.exhausted()) break;
    ++iteration;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].u[i] / n;
    Vertex& worst = simplex.back();

    std::vector<double> reflected = combine(centroid, worst.u, -1.0);
    const double fr = search.evaluate(reflected);
    if (fr < simplex.front().f) {
      std::vector<double> expanded = combine(centroid, worst.u, -2.0);
      const double fe = search.evaluate(expanded);
      worst = fe < fr ? Vertex{expanded, fe} : Vertex{reflected, fr};
      continue;
    }
    if (fr < simplex[n - 1].f) {
      worst = {reflected, fr};
      continue;
    }
    const bool outside = fr < worst.f;
    std::vector<double> contracted =
        outside ? combine(centroid, reflected, 0.5) : combine(centroid, worst.u, 0.5);
    const double fc = search.evaluate(contracted);
    if (fc < std::min(fr, worst.f)) {
      worst = {contracted, fc};
      continue;
    }
    for (std::size_t v = 1; v <= n && !search.exhausted(); ++v) {
      simplex[v].u = combine(simplex[0].u, simplex[v].u, 0.5);
      simplex[v].f = search.evaluate(simplex[v].u);
    }
  }

  std::stable_sort(simplex.begin(), simplex.end(), by_value);
  result.best = search.to_physical(simplex.front().u);
  result.objective = simplex.front().f;
  result.initial_objective = initial_objective;
  result.residual_norm = std::sqrt(result.objective);
  result.iterations = iteration;
  result.evaluations = search.evaluations();
  result.converged = converged;
  for (const auto& b : fp.free) result.parameters.push_back(b.id);

  // Local curvature by central differences, stencil kept inside the bounds.
  const std::size_t dof = fp.target_signal.size() > n ? fp.target_signal.size() - n : 1;
  const double variance = result.objective / static_cast<double>(dof);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = fp.free[i];
    const double h = 1e-3 * (b.upper - b.lower);
    std::vector<double> p = result.best;
    const double centre = std::clamp(p[i], b.lower + h, b.upper - h);
    p[i] = centre;
    const double f0 = objective(p, fp);
    p[i] = centre + h;
    const double fp_ = objective(p, fp);
    p[i] = centre - h;
    const double fm = objective(p, fp);
    const double curvature = (fp_ - 2.0 * f0 + fm) / (h * h);
    result.curvature.push_back(curvature);
    result.sensitivity.push_back(curvature > 0.0 ? std::sqrt(2.0 * variance / curvature)
                                                 : std::numeric_limits<double>::infinity());
  }
  return result;
}

std::vector<double> add_multiplicative_noise(std::span<const double> signal, double relative,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(signal.begin(), signal.end());
  for (double& v : out) v *= 1.0 + relative * normal(rng);
  return out;
}

}  // namespace eit
