#include "eit/spectrum.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "eit/errors.hpp"
#include "eit/liouville.hpp"
#include "eit/serialize.hpp"
#include "eit/units.hpp"

namespace eit {

namespace {

// Velocity nodes with paired weights. Doppler-free scans use the single node
// vz = 0 with unit weight in both rules.
PairedRule velocity_rule(const Model& model, const ScanConfig& scan) {
  if (scan.doppler_on) return make_paired_rule(model.ensemble, model.quadrature);
  return PairedRule{{0.0}, {1.0}, {1.0}};
}

ChannelSet select_channels(const Model& model, const ChannelSet& channels, const ScanConfig& scan) {
  if (scan.m_sum_on) return channels;
  if (scan.only_abs_m) {
    for (const auto& ch : channels)
      if (ch.abs_m == *scan.only_abs_m) return {ch};
    throw DomainError("no channel with |M| = " + std::to_string(*scan.only_abs_m));
  }
  SublevelChannel bare;
  bare.abs_m = 0;
  bare.multiplicity = 1;
  bare.f_probe = 1.0;
  bare.f_coupling = 1.0;
  bare.g1 = rabi_frequency(model.dipoles.probe_au, 1.0, model.lasers.probe_field());
  bare.g2 = rabi_frequency(model.dipoles.coupling_au, 1.0, model.lasers.coupling_field());
  return {bare};
}

// Per-channel, per-grid-point results under both quadrature rules.
struct ChannelGrid {
  std::vector<double> fine22, coarse22, fine33, coarse33;
};

// Weak-probe closed forms with everything that depends only on the coupling
// detuning precomputed per velocity node.
class AnalyticKernel {
 public:
  AnalyticKernel(const CascadeSystem& sys, const SublevelChannel& ch,
                 const std::vector<double>& delta2_nodes)
      : n_(delta2_nodes.size()) {
    const double w = sys.transit;
    g21w_ = sys.gamma21() + w;
    g31w_ = sys.gamma31() + w;
    const double g32w = sys.gamma32() + w;
    const double g3w = sys.gamma3 + w;
    const double g2w = sys.gamma2 + w;
    const double g2sq = ch.g2 * ch.g2;
    quarter_g2sq_ = 0.25 * g2sq;
    const double open = 1.0 - sys.W32() / g3w;
    const double prefactor = ch.g1 * ch.g1 * sys.rho11_0();
    g32w_ = g32w;
    g2w_ = g2w;
    A_.resize(n_);
    scale22_.resize(n_);
    scale33_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const DriveParams drv{ch.g1, ch.g2, 0.0, delta2_nodes[k], sys.rho11_0()};
      const double A = helper_A(sys, drv);
      const double D = A * g2w + 0.5 * g2sq * g32w * open;
      A_[k] = A;
      scale22_[k] = -prefactor / (2.0 * D);
      scale33_[k] = prefactor * g2sq / (8.0 * D * g3w);
    }
    open_quarter_g2sq_ = quarter_g2sq_ * open;
  }

  ExcitedPopulations operator()(std::size_t k, double delta1, double delta2) const {
    // den = [d1 + i a][d1 + d2 + i b] - g2^2/4
    const double s = delta1 + delta2;
    const double den_re = delta1 * s - g21w_ * g31w_ - quarter_g2sq_;
    const double den_im = delta1 * g31w_ + g21w_ * s;
    // num22 = (g2^2/4) open (d2 - i g32w) + A (s + i g31w)
    const double n22_re = open_quarter_g2sq_ * delta2 + A_[k] * s;
    const double n22_im = -open_quarter_g2sq_ * g32w_ + A_[k] * g31w_;
    // num33 = -2 g32w (s + i g31w) + (g2 + w)(d2 - i g32w)
    const double n33_re = -2.0 * g32w_ * s + g2w_ * delta2;
    const double n33_im = -2.0 * g32w_ * g31w_ - g2w_ * g32w_;
    const double mag = den_re * den_re + den_im * den_im;
    const double im22 = (n22_im * den_re - n22_re * den_im) / mag;
    const double im33 = (n33_im * den_re - n33_re * den_im) / mag;
    return {scale22_[k] * im22, scale33_[k] * im33};
  }

 private:
  std::size_t n_;
  double g21w_ = 0, g31w_ = 0, g32w_ = 0, g2w_ = 0;
  double quarter_g2sq_ = 0, open_quarter_g2sq_ = 0;
  std::vector<double> A_, scale22_, scale33_;
};

template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += workers) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<ChannelGrid> compute_channels(const Model& model, const ChannelSet& channels,
                                          const ScanConfig& scan, const PairedRule& rule) {
  const CascadeSystem& sys = model.system;
  const double omega21 = units::cyclic_MHz_to_angular(sys.omega21_cm * constants::wavenumber_to_MHz);
  const double omega32 = units::cyclic_MHz_to_angular(sys.omega32_cm * constants::wavenumber_to_MHz);
  const double delta2 = units::cyclic_MHz_to_angular(scan.delta2_MHz);
  const Geometry geometry = model.lasers.geometry;
  const std::size_t nodes = rule.nodes.size();
  const std::size_t points = scan.delta1_MHz.size();

  // Coupling detuning per node does not depend on the probe detuning.
  std::vector<double> delta2_nodes(nodes);
  for (std::size_t k = 0; k < nodes; ++k)
    delta2_nodes[k] = velocity_detunings(0.0, delta2, omega21, omega32, rule.nodes[k], geometry).delta2;

  std::vector<ChannelGrid> out(channels.size());
  for (auto& g : out) {
    g.fine22.assign(points, 0.0);
    g.coarse22.assign(points, 0.0);
    g.fine33.assign(points, 0.0);
    g.coarse33.assign(points, 0.0);
  }

  std::vector<AnalyticKernel> kernels;
  if (scan.engine == Engine::analytic)
    for (const auto& ch : channels) kernels.emplace_back(sys, ch, delta2_nodes);

  parallel_for(points, scan.threads, [&](std::size_t i) {
    const double delta1 = units::cyclic_MHz_to_angular(scan.delta1_MHz[i]);
    for (std::size_t c = 0; c < channels.size(); ++c) {
      CompensatedSum f22, c22, f33, c33;
      for (std::size_t k = 0; k < nodes; ++k) {
        const DetuningPair d =
            velocity_detunings(delta1, delta2, omega21, omega32, rule.nodes[k], geometry);
        ExcitedPopulations p;
        if (scan.engine == Engine::analytic) {
          p = kernels[c](k, d.delta1, delta2_nodes[k]);
        } else {
          const DriveParams drv{channels[c].g1, channels[c].g2, d.delta1, delta2_nodes[k],
                                sys.rho11_0()};
          const DensityState st = solve_steady_state(sys, drv);
          p = {st.rho22, st.rho33};
        }
        f22.add(rule.fine_weights[k] * p.rho22);
        c22.add(rule.coarse_weights[k] * p.rho22);
        f33.add(rule.fine_weights[k] * p.rho33);
        c33.add(rule.coarse_weights[k] * p.rho33);
      }
      const double mult = channels[c].multiplicity;
      out[c].fine22[i] = mult * f22.value();
      out[c].coarse22[i] = mult * c22.value();
      out[c].fine33[i] = mult * f33.value();
      out[c].coarse33[i] = mult * c33.value();
    }
  });
  return out;
}

Metadata describe(const Model& model, const ScanConfig& scan, std::size_t channel_count) {
  const auto& s = model.system;
  const auto& l = model.lasers;
  const auto& q = model.quadrature;
  auto num = [](double v) { return format_number(v); };
  auto branch = [](Branch b) { return b == Branch::P ? "P" : b == Branch::Q ? "Q" : "R"; };
  Metadata m{
      {"system.omega21", num(s.omega21_cm) + " cm-1"},
      {"system.omega32", num(s.omega32_cm) + " cm-1"},
      {"system.gamma2", num(s.gamma2) + " Mrad/s"},
      {"system.gamma3", num(s.gamma3) + " Mrad/s"},
      {"system.b2", num(s.b2)},
      {"system.b3", num(s.b3)},
      {"system.gamma12_c", num(s.gamma12_c) + " Mrad/s"},
      {"system.gamma13_c", num(s.gamma13_c) + " Mrad/s"},
      {"system.gamma23_c", num(s.gamma23_c) + " Mrad/s"},
      {"system.transit", num(s.transit) + " Mrad/s"},
      {"system.replenish", num(s.replenish) + " Mrad/s"},
      {"system.J1", std::to_string(s.J1)},
      {"system.J2", std::to_string(s.J2)},
      {"system.J3", std::to_string(s.J3)},
      {"system.probe_branch", branch(s.probe_branch)},
      {"system.coupling_branch", branch(s.coupling_branch)},
      {"system.mu_probe", num(model.dipoles.probe_au) + " au"},
      {"system.mu_coupling", num(model.dipoles.coupling_au) + " au"},
      {"lasers.probe_power", num(l.probe_power_W) + " W"},
      {"lasers.probe_waist", num(l.probe_waist_m) + " m"},
      {"lasers.coupling_power", num(l.coupling_power_W) + " W"},
      {"lasers.coupling_waist", num(l.coupling_waist_m) + " m"},
      {"lasers.geometry",
       l.geometry == Geometry::counter_propagating ? "counter_propagating" : "co_propagating"},
      {"lasers.delta2", num(scan.delta2_MHz) + " MHz"},
      {"ensemble.most_probable_speed", num(model.ensemble.most_probable_speed) + " m/s"},
      {"scan.points", std::to_string(scan.delta1_MHz.size())},
      {"scan.doppler", scan.doppler_on ? "on" : "off"},
      {"scan.m_sum", scan.m_sum_on ? "on" : "off"},
      {"scan.engine", to_string(scan.engine)},
      {"scan.channels_used", std::to_string(channel_count)},
  };
  if (!scan.m_sum_on && scan.only_abs_m) m.emplace_back("scan.abs_m", std::to_string(*scan.only_abs_m));
  if (model.ensemble.temperature_K > 0.0) {
    m.emplace_back("ensemble.temperature", num(model.ensemble.temperature_K) + " K");
    m.emplace_back("ensemble.mass", num(model.ensemble.mass_amu) + " amu");
  }
  if (scan.doppler_on) {
    m.emplace_back("quadrature.scheme",
                   q.scheme == QuadratureScheme::uniform_trapezoid ? "trapezoid" : "gauss_hermite");
    m.emplace_back("quadrature.nodes", std::to_string(q.node_count));
    m.emplace_back("quadrature.span", num(q.span));
    m.emplace_back("quadrature.tolerance", num(q.refinement_tolerance));
  }
  return m;
}

// Largest |fine - coarse| of the summed signal relative to its peak. Throws
// when it exceeds the tolerance.
double check_refinement(const std::vector<ChannelGrid>& grids, std::size_t points, bool want22,
                        bool want33, double tolerance) {
  double worst = 0.0;
  auto check = [&](auto fine_of, auto coarse_of, const char* label) {
    double peak = 0.0;
    double dev = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
      CompensatedSum f, c;
      for (const auto& g : grids) {
        f.add(fine_of(g)[i]);
        c.add(coarse_of(g)[i]);
      }
      peak = std::max(peak, std::abs(f.value()));
      dev = std::max(dev, std::abs(f.value() - c.value()));
    }
    if (peak == 0.0) return;
    const double rel = dev / peak;
    worst = std::max(worst, rel);
    if (rel > tolerance) {
      throw QuadratureNotConverged(std::string("Doppler integration of ") + label +
                                       " not converged: refinement changed the spectrum by " +
                                       format_number(rel) + " of its peak (tolerance " +
                                       format_number(tolerance) + ")",
                                   rel, tolerance);
    }
  };
  if (want22)
    check([](const ChannelGrid& g) -> const std::vector<double>& { return g.fine22; },
          [](const ChannelGrid& g) -> const std::vector<double>& { return g.coarse22; }, "rho22");
  if (want33)
    check([](const ChannelGrid& g) -> const std::vector<double>& { return g.fine33; },
          [](const ChannelGrid& g) -> const std::vector<double>& { return g.coarse33; }, "rho33");
  return worst;
}

struct Computed {
  ChannelSet channels;
  std::vector<ChannelGrid> grids;
  double refinement = 0.0;
  Metadata metadata;
};

Computed compute(const Model& model, const ChannelSet& all_channels, const ScanConfig& scan) {
  scan.validate();
  model.system.validate();
  Computed out;
  out.channels = select_channels(model, all_channels, scan);
  const PairedRule rule = velocity_rule(model, scan);
  out.grids = compute_channels(model, out.channels, scan, rule);
  if (scan.doppler_on)
    out.refinement = check_refinement(out.grids, scan.delta1_MHz.size(), scan.want_rho22,
                                      scan.want_rho33, model.quadrature.refinement_tolerance);
  out.metadata = describe(model, scan, out.channels.size());
  out.metadata.emplace_back("quadrature.refinement", format_number(out.refinement));
  return out;
}

}  // namespace

double LaserPair::probe_field() const { return units::field_amplitude(probe_power_W, probe_waist_m); }

double LaserPair::coupling_field() const {
  return units::field_amplitude(coupling_power_W, coupling_waist_m);
}

ChannelSet Model::channels() const {
  return build_channels(system, dipoles.probe_au, dipoles.coupling_au, lasers.probe_field(),
                        lasers.coupling_field());
}

const char* to_string(Engine e) { return e == Engine::analytic ? "analytic" : "oracle"; }
const char* to_string(Channel c) { return c == Channel::rho22 ? "rho22" : "rho33"; }

void ScanConfig::validate() const {
  if (delta1_MHz.empty()) throw DomainError("scan grid is empty");
  for (std::size_t i = 0; i < delta1_MHz.size(); ++i) {
    if (!std::isfinite(delta1_MHz[i])) throw DomainError("scan grid contains a non-finite value");
    if (i > 0 && !(delta1_MHz[i] > delta1_MHz[i - 1]))
      throw DomainError("scan grid must be strictly increasing");
  }
  if (!std::isfinite(delta2_MHz)) throw DomainError("coupling detuning must be finite");
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 2) throw DomainError("a grid needs at least two points");
  std::vector<double> g(points);
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) g[i] = lo + i * step;
  g.back() = hi;
  return g;
}

Spectrum simulate(const Model& model, const ScanConfig& scan) {
  return simulate(model, model.channels(), scan);
}

Spectrum simulate(const Model& model, const ChannelSet& channels, const ScanConfig& scan) {
  const Computed c = compute(model, channels, scan);
  const std::size_t points = scan.delta1_MHz.size();
  Spectrum s;
  s.delta1_MHz = scan.delta1_MHz;
  s.rho22.assign(points, 0.0);
  s.rho33.assign(points, 0.0);
  for (std::size_t i = 0; i < points; ++i) {
    CompensatedSum r22, r33;
    for (const auto& g : c.grids) {
      r22.add(g.fine22[i]);
      r33.add(g.fine33[i]);
    }
    // Round-off can leave tiny negative values in far wings.
    s.rho22[i] = scan.want_rho22 ? std::max(0.0, r22.value()) : 0.0;
    s.rho33[i] = scan.want_rho33 ? std::max(0.0, r33.value()) : 0.0;
  }
  s.metadata = c.metadata;
  s.quadrature_refinement = c.refinement;
  return s;
}

std::vector<Spectrum> per_m_components(const Model& model, const ScanConfig& scan) {
  return per_m_components(model, model.channels(), scan);
}

std::vector<Spectrum> per_m_components(const Model& model, const ChannelSet& channels,
                                       const ScanConfig& scan) {
  const Computed c = compute(model, channels, scan);
  std::vector<Spectrum> out;
  for (std::size_t k = 0; k < c.channels.size(); ++k) {
    Spectrum s;
    s.delta1_MHz = scan.delta1_MHz;
    s.rho22 = scan.want_rho22 ? c.grids[k].fine22 : std::vector<double>(scan.delta1_MHz.size(), 0.0);
    s.rho33 = scan.want_rho33 ? c.grids[k].fine33 : std::vector<double>(scan.delta1_MHz.size(), 0.0);
    s.metadata = c.metadata;
    s.metadata.emplace_back("component.abs_m", std::to_string(c.channels[k].abs_m));
    s.metadata.emplace_back("component.multiplicity", std::to_string(c.channels[k].multiplicity));
    s.metadata.emplace_back("component.g1", format_number(c.channels[k].g1) + " Mrad/s");
    s.metadata.emplace_back("component.g2", format_number(c.channels[k].g2) + " Mrad/s");
    s.quadrature_refinement = c.refinement;
    out.push_back(std::move(s));
  }
  return out;
}

double predict_dip_position(double delta2_MHz, double omega1_cm, double omega2_cm,
                            bool doppler_on) {
  if (omega2_cm == 0.0) throw DomainError("coupling wavenumber must be nonzero");
  if (!doppler_on) return -delta2_MHz;
  return -std::abs(omega1_cm / omega2_cm) * delta2_MHz;
}

}  // namespace eit
