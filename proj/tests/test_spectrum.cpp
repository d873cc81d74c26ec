#include <doctest.h>

#include <cmath>

#include "eit/errors.hpp"
#include "eit/spectrum.hpp"
#include "fixtures.hpp"

using namespace eit;

namespace {

double meta(const Spectrum& s, const std::string& key) {
  for (const auto& [k, v] : s.metadata)
    if (k == key) return std::stod(v);
  FAIL("missing metadata key " << key);
  return 0.0;
}

bool has_meta(const Spectrum& s, const std::string& key) {
  for (const auto& [k, v] : s.metadata)
    if (k == key) return true;
  return false;
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("grid") {
    const auto g = linear_grid(-3000.0, 3000.0, 801);
    CHECK(g.size() == 801);
    CHECK(g.front() == -3000.0);
    CHECK(g.back() == 3000.0);
    CHECK(g[400] == 0.0);
    CHECK(g[1] - g[0] == doctest::Approx(7.5));
    ScanConfig s;
    s.delta1_MHz = {0.0, 1.0, 1.0};
    CHECK_THROWS_AS(s.validate(), DomainError);
  }

  TEST_CASE("dip position law") {
    CHECK(predict_dip_position(420.0, 15642.636, 17053.954, true) == doctest::Approx(-385.25).epsilon(1e-4));
    CHECK(predict_dip_position(1000.0, 15642.636, 17053.954, true) == doctest::Approx(-917.24).epsilon(1e-4));
    CHECK(predict_dip_position(420.0, 15642.636, 17053.954, false) == -420.0);
    CHECK(predict_dip_position(0.0, 15642.636, 17053.954, true) == 0.0);
  }

  TEST_CASE("simulated dips follow the law within two grid steps") {
    for (double d2 : {0.0, 420.0, 1000.0}) {
      auto cfg = fixtures::preset("li2_fig4");
      cfg.scan.delta2_MHz = d2;
      cfg.scan.want_rho33 = false;
      const auto f = extract_features(simulate(cfg.model, cfg.scan), Channel::rho22);
      const double want = predict_dip_position(d2, 15642.636, 17053.954, true);
      CHECK(std::abs(f.dip_position - want) <= 15.0);
    }
  }

  TEST_CASE("coupling off: Doppler profile and no level-3 signal") {
    auto cfg = fixtures::preset("li2_fig3a");
    const auto s = simulate(cfg.model, cfg.scan);
    for (double v : s.rho33) CHECK(v == 0.0);
    for (double v : s.rho22) CHECK(v >= 0.0);
    const double fwhm = full_width_half_max(s.delta1_MHz, s.rho22);
    CHECK(fwhm == doctest::Approx(cfg.model.ensemble.doppler_fwhm_MHz(15642.636)).epsilon(0.02));
    CHECK(s.quadrature_refinement < 1e-4);
    CHECK(meta(s, "quadrature.refinement") == doctest::Approx(s.quadrature_refinement));
  }

  TEST_CASE("weak coupling gives a single level-3 peak") {
    auto cfg = fixtures::preset("li2_fig3b");
    cfg.scan.want_rho22 = false;
    cfg.scan.delta1_MHz = linear_grid(-1500.0, 1500.0, 201);
    const auto s = simulate(cfg.model, cfg.scan);
    CHECK_THROWS_AS(extract_features(s, Channel::rho33), FewerThanTwoPeaks);
  }

  TEST_CASE("strong coupling splits level 3 and opens a dip in level 2") {
    auto cfg = fixtures::preset("li2_fig4");
    const auto s = simulate(cfg.model, cfg.scan);
    const auto f22 = extract_features(s, Channel::rho22);
    CHECK(std::abs(f22.dip_position) < 7.5);
    CHECK(f22.dip_depth_fraction > 0.5);
    const auto f33 = extract_features(s, Channel::rho33);
    CHECK(f33.at_splitting > 100.0);
    CHECK(f33.peak_positions.front() < 0.0);
    CHECK(f33.peak_positions.back() > 0.0);
  }

  TEST_CASE("Doppler-free single |M| splitting equals g2") {
    auto cfg = fixtures::preset("li2_fig4");
    cfg.scan.doppler_on = false;
    cfg.scan.m_sum_on = false;
    cfg.scan.want_rho22 = false;
    cfg.scan.delta1_MHz = linear_grid(-1000.0, 1000.0, 2001);
    for (int m : {5, 10, 14}) {
      cfg.scan.only_abs_m = m;
      const auto s = simulate(cfg.model, cfg.scan);
      const double g2 = cfg.model.channels()[m].g2;
      CHECK(extract_features(s, Channel::rho33).at_splitting ==
            doctest::Approx(units::angular_to_cyclic_MHz(g2)).epsilon(0.10));
    }
    cfg.scan.only_abs_m = 15;
    CHECK_THROWS_AS(simulate(cfg.model, cfg.scan), DomainError);
  }

  TEST_CASE("components add up to the summed spectrum") {
    auto cfg = fixtures::preset("li2_fig6b");
    cfg.scan.delta1_MHz = linear_grid(-1500.0, 500.0, 41);
    const auto total = simulate(cfg.model, cfg.scan);
    const auto parts = per_m_components(cfg.model, cfg.scan);
    REQUIRE(parts.size() == 15);
    int nonzero = 0;
    for (const auto& p : parts) {
      bool any = false;
      for (double v : p.rho33) any = any || v > 0.0;
      nonzero += any;
      CHECK(has_meta(p, "component.abs_m"));
    }
    CHECK(nonzero == 14);
    for (std::size_t i = 0; i < total.delta1_MHz.size(); ++i) {
      double r22 = 0.0, r33 = 0.0;
      for (const auto& p : parts) {
        r22 += p.rho22[i];
        r33 += p.rho33[i];
      }
      CHECK(std::abs(r22 - total.rho22[i]) <= 1e-12 * total.rho22[i]);
      CHECK(std::abs(r33 - total.rho33[i]) <= 1e-12 * total.rho33[i]);
    }
  }

  TEST_CASE("thread count does not change a single bit") {
    auto cfg = fixtures::preset("li2_fig6a");
    cfg.scan.delta1_MHz = linear_grid(-800.0, 200.0, 61);
    cfg.scan.threads = 1;
    const auto a = simulate(cfg.model, cfg.scan);
    cfg.scan.threads = 5;
    const auto b = simulate(cfg.model, cfg.scan);
    CHECK(a.rho22 == b.rho22);
    CHECK(a.rho33 == b.rho33);
  }

  TEST_CASE("analytic and oracle engines agree for a weak probe") {
    auto cfg = fixtures::preset("li2_fig4");
    cfg.scan.delta1_MHz = linear_grid(-1200.0, 1200.0, 50);
    const auto a = simulate(cfg.model, cfg.scan);
    cfg.scan.engine = Engine::oracle;
    const auto o = simulate(cfg.model, cfg.scan);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rho22.size(); ++i) {
      worst = std::max(worst, std::abs(a.rho22[i] - o.rho22[i]) / o.rho22[i]);
      worst = std::max(worst, std::abs(a.rho33[i] - o.rho33[i]) / o.rho33[i]);
    }
    CHECK(worst <= 1e-3);
  }

  TEST_CASE("beam geometry enters the Doppler shifts") {
    auto cfg = fixtures::preset("li2_fig6a");
    cfg.scan.want_rho33 = false;
    cfg.scan.delta1_MHz = linear_grid(-3000.0, 3000.0, 201);
    const auto counter = simulate(cfg.model, cfg.scan);
    cfg.model.lasers.geometry = Geometry::co_propagating;
    const auto co = simulate(cfg.model, cfg.scan);
    CHECK(co.rho22 != counter.rho22);
    bool echoed = false;
    for (const auto& [k, v] : co.metadata) echoed = echoed || (k == "lasers.geometry" && v == "co_propagating");
    CHECK(echoed);
  }

  TEST_CASE("feature extraction on constructed lines") {
    std::vector<double> x, y;
    for (int i = -600; i <= 600; ++i) {
      const double v = 2.0 * i;
      x.push_back(v);
      const double l = 1.0 / (1.0 + std::pow((v - 500.0) / 60.0, 2)) + 1.0 / (1.0 + std::pow((v + 500.0) / 60.0, 2));
      y.push_back(l);
    }
    const auto f = extract_features(x, y);
    REQUIRE(f.peak_positions.size() >= 2);
    CHECK(f.at_splitting == doctest::Approx(1000.0).epsilon(2.0 / 1000.0));
    CHECK(std::abs(f.dip_position) <= 2.0);
    CHECK(f.dip_depth_fraction > 0.9);
    CHECK(f.dip_depth_fraction <= 1.0);

    std::vector<double> g;
    for (double v : x) g.push_back(std::exp(-4.0 * std::log(2.0) * v * v / (300.0 * 300.0)));
    CHECK(full_width_half_max(x, g) == doctest::Approx(300.0).epsilon(1e-3));
    CHECK_THROWS_AS(extract_features(x, g), FewerThanTwoPeaks);
  }
}
