#include "eit/doppler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eit/errors.hpp"
#include "eit/units.hpp"

namespace eit {

namespace {

const double kTwoSqrtLn2 = 2.0 * std::sqrt(std::log(2.0));

void normalize(std::vector<double>& weights) {
  CompensatedSum total;
  for (double w : weights) total.add(w);
  const double s = total.value();
  for (double& w : weights) w /= s;
}

}  // namespace

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    carry_ += (sum_ - t) + x;
  else
    carry_ += (x - t) + sum_;
  sum_ = t;
}

Ensemble Ensemble::from_temperature(double temperature_K, double mass_amu) {
  if (!(temperature_K > 0.0) || !(mass_amu > 0.0))
    throw DomainError("temperature and mass must be positive");
  Ensemble e;
  e.temperature_K = temperature_K;
  e.mass_amu = mass_amu;
  e.most_probable_speed = std::sqrt(2.0 * constants::boltzmann * temperature_K /
                                    (mass_amu * constants::atomic_mass_unit));
  return e;
}

Ensemble Ensemble::from_doppler_fwhm(double fwhm_MHz, double probe_wavenumber_cm) {
  if (!(fwhm_MHz > 0.0) || !(probe_wavenumber_cm > 0.0))
    throw DomainError("Doppler width and wavenumber must be positive");
  Ensemble e;
  // nu [1/m] * u_p [m/s] gives Hz.
  e.most_probable_speed = fwhm_MHz * 1e6 / (probe_wavenumber_cm * 100.0 * kTwoSqrtLn2);
  return e;
}

double Ensemble::doppler_fwhm_MHz(double wavenumber_cm) const {
  return wavenumber_cm * 100.0 * most_probable_speed * kTwoSqrtLn2 * 1e-6;
}

double maxwellian(double vz, double most_probable_speed) {
  const double x = vz / most_probable_speed;
  return std::exp(-x * x) / (std::sqrt(constants::pi) * most_probable_speed);
}

void QuadratureSpec::validate() const {
  if (scheme == QuadratureScheme::uniform_trapezoid) {
    if (node_count < 51 || node_count % 2 == 0)
      throw DomainError("trapezoid node count must be odd and at least 51");
    if (!(span > 0.0)) throw DomainError("quadrature span must be positive");
  } else if (node_count < 2) {
    throw DomainError("Gauss-Hermite node count must be at least 2");
  }
  if (!(refinement_tolerance > 0.0)) throw DomainError("refinement tolerance must be positive");
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
  if (n < 1) throw DomainError("Gauss-Hermite order must be positive");
  constexpr double kEps = 1e-14;
  constexpr double kPiM4 = 0.7511255444649425;  // pi^(-1/4)
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[i - 2];
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = kPiM4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= kEps * std::max(1.0, std::abs(z))) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = w[n - 1 - i] = 2.0 / (pp * pp);
  }
  return {x, w};
}

PairedRule make_paired_rule(const Ensemble& ens, const QuadratureSpec& q) {
  q.validate();
  const double up = ens.most_probable_speed;
  if (!(up > 0.0)) throw DomainError("most probable speed must be positive");
  PairedRule rule;

  if (q.scheme == QuadratureScheme::uniform_trapezoid) {
    const int fine = 2 * (q.node_count - 1) + 1;
    const double half = q.span * up;
    const double h = 2.0 * half / (fine - 1);
    rule.nodes.resize(fine);
    rule.fine_weights.resize(fine);
    rule.coarse_weights.assign(fine, 0.0);
    for (int i = 0; i < fine; ++i) {
      // Symmetric construction keeps +v and -v nodes exact mirror images.
      const double v = (i - (fine - 1) / 2) * h;
      rule.nodes[i] = v;
      const double density = maxwellian(v, up);
      const double end = (i == 0 || i == fine - 1) ? 0.5 : 1.0;
      rule.fine_weights[i] = end * h * density;
      if (i % 2 == 0) rule.coarse_weights[i] = end * 2.0 * h * density;
    }
  } else {
    const auto [xc, wc] = gauss_hermite(q.node_count);
    const auto [xf, wf] = gauss_hermite(2 * q.node_count);
    const double norm = 1.0 / std::sqrt(constants::pi);
    for (std::size_t i = 0; i < xc.size(); ++i) {
      rule.nodes.push_back(up * xc[i]);
      rule.coarse_weights.push_back(norm * wc[i]);
      rule.fine_weights.push_back(0.0);
    }
    for (std::size_t i = 0; i < xf.size(); ++i) {
      rule.nodes.push_back(up * xf[i]);
      rule.coarse_weights.push_back(0.0);
      rule.fine_weights.push_back(norm * wf[i]);
    }
  }
  // The truncated (or discretized) Maxwellian is renormalized to unit mass.
  normalize(rule.coarse_weights);
  normalize(rule.fine_weights);
  return rule;
}

DetuningPair velocity_detunings(double delta1, double delta2, double omega21, double omega32,
                                double vz, Geometry geometry) {
  const double beta = vz / constants::speed_of_light;
  DetuningPair out;
  out.delta1 = (1.0 - beta) * delta1 - beta * omega21;
  if (geometry == Geometry::counter_propagating)
    out.delta2 = (1.0 + beta) * delta2 + beta * omega32;
  else
    out.delta2 = (1.0 - beta) * delta2 - beta * omega32;
  return out;
}

double doppler_average(const std::function<double(double)>& observable, const Ensemble& ens,
                       const QuadratureSpec& q) {
  const PairedRule rule = make_paired_rule(ens, q);
  CompensatedSum coarse, fine, magnitude;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double f = observable(rule.nodes[i]);
    if (!std::isfinite(f)) throw DomainError("observable is not finite on the integration span");
    coarse.add(rule.coarse_weights[i] * f);
    fine.add(rule.fine_weights[i] * f);
    magnitude.add(rule.fine_weights[i] * std::abs(f));
  }
  const double deviation = std::abs(fine.value() - coarse.value());
  const double allowed =
      q.refinement_tolerance * std::max(std::abs(fine.value()), magnitude.value());
  if (deviation > allowed) {
    throw QuadratureNotConverged("Doppler average changed by " + std::to_string(deviation) +
                                     " under refinement (allowed " + std::to_string(allowed) +
                                     "); increase the node count",
                                 deviation, allowed);
  }
  return fine.value();
}

}  // namespace eit
