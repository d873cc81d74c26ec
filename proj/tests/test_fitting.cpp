#include <doctest.h>

#include <cmath>

#include "eit/errors.hpp"
#include "eit/fitting.hpp"
#include "fixtures.hpp"

using namespace eit;

namespace {

// Doppler-free, |M|-summed rho33 on a coarse grid: cheap enough to fit often.
FitProblem small_problem(double b3 = 0.2) {
  auto cfg = fixtures::preset("li2_fig4");
  cfg.model.system.b3 = b3;
  cfg.scan.doppler_on = false;
  cfg.scan.want_rho22 = false;
  cfg.scan.delta1_MHz = linear_grid(-1200.0, 1200.0, 241);
  FitProblem fp;
  fp.model = cfg.model;
  fp.scan = cfg.scan;
  fp.channel = Channel::rho33;
  fp.target_delta1_MHz = cfg.scan.delta1_MHz;
  fp.target_signal = simulate(cfg.model, cfg.scan).rho33;
  return fp;
}

}  // namespace

TEST_SUITE("fitting") {
  TEST_CASE("parameter names") {
    CHECK(parse_fit_parameter("mu_coupling") == FitParameter::mu_coupling);
    CHECK(parse_fit_parameter("gamma13_c") == FitParameter::gamma13_c);
    CHECK_FALSE(parse_fit_parameter("mu_probe"));
    CHECK(std::string(unit_of(FitParameter::gamma12_c)) == "MHz");
  }

  TEST_CASE("objective") {
    auto fp = small_problem();
    fp.free = {{FitParameter::mu_coupling, 0.5, 3.0}};
    const std::vector<double> truth{1.45};
    double scale = 0.0;
    for (double v : fp.target_signal) scale = std::max(scale, v);
    CHECK(objective(truth, fp) <= 1e-10 * scale * scale);
    const std::vector<double> up{1.45 * 1.1};
    CHECK(objective(up, fp) > objective(truth, fp));
    // A one-dimensional scan has its minimum at the truth.
    double best = 1e300, at = 0.0;
    for (double mu = 1.2; mu <= 1.7; mu += 0.05) {
      const std::vector<double> p{mu};
      const double f = objective(p, fp);
      if (f < best) best = f, at = mu;
    }
    CHECK(at == doctest::Approx(1.45).epsilon(1e-9));
    const std::vector<double> outside{3.5};
    CHECK_THROWS_AS(objective(outside, fp), DomainError);

    auto zero = fp;
    zero.target_signal.assign(zero.target_signal.size(), 0.0);
    zero.free = {{FitParameter::amplitude_scale, 0.0, 1.0}};
    const std::vector<double> s0{0.0};
    CHECK(objective(s0, zero) == 0.0);
  }

  TEST_CASE("self-match recovers the dipole") {
    auto fp = small_problem();
    fp.model.dipoles.coupling_au = 1.0;
    fp.free = {{FitParameter::mu_coupling, 0.5, 3.0}};
    const std::vector<double> init{1.0};
    const auto r = fit(fp, init);
    CHECK(r.converged);
    CHECK(r.value(FitParameter::mu_coupling) == doctest::Approx(1.45).epsilon(1e-4));
    CHECK(r.objective <= r.initial_objective);
    CHECK(r.evaluations <= 2000);
    CHECK(r.trace.size() == static_cast<std::size_t>(r.iterations) + 1);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1]);
  }

  TEST_CASE("amplitude-only fit is the linear least-squares solution") {
    auto fp = small_problem();
    for (double& v : fp.target_signal) v *= 2.5;
    fp.free = {{FitParameter::amplitude_scale, 0.1, 10.0}};
    const std::vector<double> init{1.0};
    const auto r = fit(fp, init);
    const auto m = model_signal(fp, init);
    double ym = 0.0, mm = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      ym += fp.target_signal[i] * m[i];
      mm += m[i] * m[i];
    }
    CHECK(r.value(FitParameter::amplitude_scale) == doctest::Approx(ym / mm).epsilon(1e-6));
    CHECK(ym / mm == doctest::Approx(2.5).epsilon(1e-12));
  }

  TEST_CASE("noisy round trip and curvature sensitivity") {
    auto fp = small_problem();
    fp.target_signal = add_multiplicative_noise(fp.target_signal, 0.01, 7);
    fp.model.dipoles.coupling_au = 1.0;
    fp.free = {{FitParameter::mu_coupling, 0.5, 3.0}, {FitParameter::amplitude_scale, 0.5, 2.0}};
    const std::vector<double> init{1.0, 1.0};
    const auto r = fit(fp, init);
    CHECK(r.converged);
    CHECK(r.value(FitParameter::mu_coupling) == doctest::Approx(1.45).epsilon(0.02));
    REQUIRE(r.sensitivity.size() == 2);
    CHECK(r.curvature[0] > 0.0);
    CHECK(std::isfinite(r.sensitivity[0]));
    CHECK(r.sensitivity[0] < 0.05);
  }

  TEST_CASE("branching ratio of level 3 barely matters") {
    auto truth = small_problem(0.2);
    const auto noisy = add_multiplicative_noise(truth.target_signal, 0.01, 11);
    const std::vector<double> init{1.2, 1.0};
    double mu_ref = 0.0, sens_ref = 0.0;
    for (double b3 : {0.2, 0.1, 0.5}) {
      auto fp = small_problem(b3);
      fp.target_signal = noisy;
      fp.free = {{FitParameter::mu_coupling, 0.5, 3.0}, {FitParameter::amplitude_scale, 0.2, 5.0}};
      const auto r = fit(fp, init);
      REQUIRE(r.converged);
      if (b3 == 0.2) {
        mu_ref = r.value(FitParameter::mu_coupling);
        sens_ref = r.sensitivity[0];
      } else {
        CHECK(std::abs(r.value(FitParameter::mu_coupling) - mu_ref) < sens_ref);
      }
    }
  }

  TEST_CASE("identical problems give identical results") {
    auto fp = small_problem();
    fp.target_signal = add_multiplicative_noise(fp.target_signal, 0.01, 3);
    fp.free = {{FitParameter::mu_coupling, 0.5, 3.0}, {FitParameter::gamma13_c, 0.1, 10.0}};
    const std::vector<double> init{1.3, 2.0};
    const auto a = fit(fp, init);
    const auto b = fit(fp, init);
    CHECK(a.best == b.best);
    CHECK(a.trace == b.trace);
    CHECK(a.evaluations == b.evaluations);
  }

  TEST_CASE("evaluation cap leaves the result flagged") {
    auto fp = small_problem();
    fp.free = {{FitParameter::mu_coupling, 0.5, 3.0}, {FitParameter::amplitude_scale, 0.5, 2.0}};
    FitOptions opt;
    opt.max_evaluations = 8;
    const std::vector<double> init{1.0, 1.0};
    const auto r = fit(fp, init, opt);
    CHECK_FALSE(r.converged);
    CHECK(r.evaluations <= 8 + 2);
  }

  TEST_CASE("invalid problems") {
    auto fp = small_problem();
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(fit(fp, one), DomainError);  // nothing free
    fp.free = {{FitParameter::mu_coupling, 2.0, 1.0}};
    CHECK_THROWS_AS(fit(fp, one), DomainError);
    fp.free = {{FitParameter::mu_coupling, 0.5, 3.0}};
    const std::vector<double> outside{4.0};
    CHECK_THROWS_AS(fit(fp, outside), DomainError);
  }

  TEST_CASE("noise generator is seeded") {
    const std::vector<double> s(100, 2.0);
    CHECK(add_multiplicative_noise(s, 0.01, 5) == add_multiplicative_noise(s, 0.01, 5));
    CHECK(add_multiplicative_noise(s, 0.01, 5) != add_multiplicative_noise(s, 0.01, 6));
  }
}
