#include <doctest.h>

#include <json.hpp>
#include <string>

#include "eit/config.hpp"
#include "eit/errors.hpp"
#include "eit/serialize.hpp"
#include "fixtures.hpp"

using namespace eit;

namespace {

std::string li2_text() { return read_text_file(fixtures::preset_path("li2_fig4")); }

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST_SUITE("io_cli") {
  TEST_CASE("preset resolves to canonical units") {
    const auto cfg = fixtures::preset("li2_fig4");
    const auto& s = cfg.model.system;
    CHECK(s.omega21_cm == 15642.636);
    CHECK(s.omega32_cm == 17053.954);
    CHECK(s.gamma2 == doctest::Approx(1000.0 / 18.0));
    CHECK(s.gamma3 == doctest::Approx(1000.0 / 16.15));
    CHECK(s.b2 == 0.1);
    CHECK(s.b3 == 0.2);
    CHECK(s.transit == doctest::Approx(units::cyclic_MHz_to_angular(2.0)));
    CHECK(s.gamma12_c == doctest::Approx(units::cyclic_MHz_to_angular(5.0)));
    CHECK(s.gamma13_c == doctest::Approx(units::cyclic_MHz_to_angular(1.0)));
    CHECK(s.gamma23_c == doctest::Approx(units::cyclic_MHz_to_angular(1.0)));
    CHECK(s.rho11_0() == 1.0);
    CHECK(cfg.model.lasers.coupling_power_W == doctest::Approx(0.48));
    CHECK(cfg.model.lasers.coupling_waist_m == doctest::Approx(360e-6));
    CHECK(cfg.model.lasers.probe_waist_m == doctest::Approx(222e-6));
    CHECK(cfg.model.dipoles.coupling_au == 1.45);
    CHECK(cfg.scan.delta1_MHz.size() == 801);
    CHECK(cfg.scan.engine == Engine::analytic);
    CHECK_FALSE(cfg.fit);
  }

  TEST_CASE("every bundled preset loads") {
    for (const char* name : {"li2_fig3a", "li2_fig3b", "li2_fig4", "li2_fig6a", "li2_fig6b"})
      CHECK_NOTHROW(fixtures::preset(name));
    CHECK(fixtures::preset("li2_fig6a").scan.delta2_MHz == 420.0);
    CHECK(fixtures::preset("li2_fig3a").model.lasers.coupling_power_W == 0.0);
  }

  TEST_CASE("missing required key is named") {
    const auto text = replace(li2_text(), "tau3 = 16.15 ns\n", "");
    try {
      parse_config(text);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.key() == "system.tau3");
    }
  }

  TEST_CASE("strict keys and sections") {
    CHECK_THROWS_AS(parse_config(replace(li2_text(), "b2 = 0.1", "b2 = 0.1\nbogus = 3")), ValidationError);
    CHECK_THROWS_AS(parse_config(li2_text() + "\n[extra]\nx = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config(replace(li2_text(), "b2 = 0.1", "b2 = 0.1\nb2 = 0.2")), ValidationError);
    CHECK_THROWS_AS(parse_config(replace(li2_text(), "tau3 = 16.15 ns", "tau3 = 16.15 ns\ngamma3 = 60 Mrad/s")),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(replace(li2_text(), "probe_branch = P", "probe_branch = X")), ValidationError);
    CHECK_THROWS_AS(parse_config(replace(li2_text(), "b3 = 0.2", "b3 = 3")), ValidationError);
    CHECK_THROWS_AS(parse_config(replace(li2_text(), "temperature = 1000 K", "doppler_fwhm = 2.6 GHz\ntemperature = 1000 K")),
                    ValidationError);
  }

  TEST_CASE("units are mandatory and checked") {
    try {
      parse_config(replace(li2_text(), "coupling_power = 480 mW", "coupling_power = 480"));
      FAIL("expected UnitError");
    } catch (const UnitError& e) {
      CHECK(e.key() == "lasers.coupling_power");
    }
    CHECK_THROWS_AS(parse_config(replace(li2_text(), "coupling_power = 480 mW", "coupling_power = 480 um")), UnitError);
    CHECK_THROWS_AS(parse_config(replace(li2_text(), "coupling_power = 480 mW", "coupling_power = 480 hp")), UnitError);
    CHECK_THROWS_AS(parse_config(replace(li2_text(), "b2 = 0.1", "b2 = 0.1 MHz")), UnitError);
    // Equivalent spellings resolve to the same value.
    const auto a = parse_config(replace(li2_text(), "coupling_power = 480 mW", "coupling_power = 0.48 W"));
    CHECK(a.model.lasers.coupling_power_W == doctest::Approx(0.48));
    const auto b = parse_config(replace(li2_text(), "tau2 = 18 ns", "gamma2 = 55.5555555556 Mrad/s"));
    CHECK(b.model.system.gamma2 == doctest::Approx(1000.0 / 18.0));
  }

  TEST_CASE("syntax errors carry a position") {
    const auto text = replace(li2_text(), "b2 = 0.1", "b2 0.1");
    try {
      parse_config(text, "bad.cfg");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() > 1);
      CHECK(e.column() >= 1);
      CHECK(std::string(e.what()).rfind("bad.cfg:", 0) == 0);
    }
    CHECK_THROWS_AS(parse_config(replace(li2_text(), "b2 = 0.1", "b2 = 0.1x")), ParseError);
    CHECK_THROWS_AS(parse_config(replace(li2_text(), "[lasers]", "[lasers")), ParseError);
    CHECK_THROWS_AS(load_config("/nonexistent/x.cfg"), ConfigError);
  }

  TEST_CASE("measured Doppler width instead of a temperature") {
    const auto cfg = parse_config(replace(replace(li2_text(), "temperature = 1000 K\n", ""), "mass = 14 amu",
                                          "doppler_fwhm = 2.6 GHz"));
    CHECK(cfg.model.ensemble.doppler_fwhm_MHz(15642.636) == doctest::Approx(2600.0));
  }

  TEST_CASE("fit section") {
    const auto text = li2_text() +
                      "\n[fit]\nchannel = rho33\nfree = mu_coupling, amplitude_scale\n"
                      "mu_coupling = 1.2 au\nmu_coupling_min = 0.5 au\nmu_coupling_max = 3 au\n"
                      "amplitude_scale = 1\namplitude_scale_min = 0.5\namplitude_scale_max = 2\n";
    const auto cfg = parse_config(text);
    REQUIRE(cfg.fit);
    REQUIRE(cfg.fit->free.size() == 2);
    CHECK(cfg.fit->free[0].id == FitParameter::mu_coupling);
    CHECK(cfg.fit->free[0].upper == 3.0);
    CHECK(cfg.fit->init[0] == 1.2);
    CHECK_THROWS_AS(parse_config(replace(text, "mu_coupling_max = 3 au\n", "")), ValidationError);
    CHECK_THROWS_AS(parse_config(replace(text, "mu_coupling = 1.2 au", "mu_coupling = 4 au")), ValidationError);
    CHECK_THROWS_AS(parse_config(replace(text, "free = mu_coupling", "free = mu_probe")), ValidationError);
  }

  TEST_CASE("measured spectra") {
    const auto m = parse_spectrum("# trace\n300,1.0\n100,3.0\n-100,2.0\n", "t.csv");
    CHECK(m.resorted);
    CHECK(m.delta1_MHz == std::vector<double>{-100.0, 100.0, 300.0});
    CHECK(m.signal == std::vector<double>{2.0, 3.0, 1.0});
    bool flagged = false;
    for (const auto& [k, v] : m.metadata) flagged = flagged || (k == "resorted" && v == "yes");
    CHECK(flagged);

    const auto w = parse_spectrum("wavenumber_cm-1 signal sigma\n15642.636 5 0.1\n15642.646 4 0.2\n", "w.txt",
                                  15642.636);
    CHECK(w.source_abscissa == Abscissa::wavenumber_cm);
    CHECK(w.delta1_MHz[0] == 0.0);
    CHECK(w.delta1_MHz[1] == doctest::Approx(299.792458).epsilon(1e-6));
    CHECK(w.uncertainty == std::vector<double>{0.1, 0.2});
    CHECK_THROWS_AS(parse_spectrum("wavenumber_cm-1,signal\n1,2\n", "w.txt"), ValidationError);

    const auto both = parse_spectrum("delta1_MHz,rho22_au,rho33_au\n0,1,2\n1,3,4\n", "s.csv", std::nullopt,
                                     Channel::rho22);
    CHECK(both.signal == std::vector<double>{1.0, 3.0});
    CHECK_FALSE(both.resorted);

    CHECK_THROWS_AS(parse_spectrum("0,1\n0,2\n", "d.csv"), ValidationError);
    CHECK_THROWS_AS(parse_spectrum("0,1\n1,nan\n", "d.csv"), ParseError);
    CHECK_THROWS_AS(parse_spectrum("0,1\n1,2,3\n", "d.csv"), ParseError);
    CHECK_THROWS_AS(parse_spectrum("# nothing\n", "d.csv"), ValidationError);
  }

  TEST_CASE("spectrum files") {
    Spectrum s;
    s.delta1_MHz = {-1.0, 0.0, 2.5};
    s.rho22 = {1e-7, -0.0, 3.0};
    s.rho33 = {0.0, 1.0 / 3.0, 2.0};
    s.metadata = {{"engine", "analytic"}};
    const auto csv = spectrum_csv(s);
    CHECK(csv == "# eitsim spectrum\n# engine = analytic\ndelta1_MHz,rho22_au,rho33_au\n"
                 "-1,1e-07,0\n0,0,0.333333333333\n2.5,3,2\n");
    const auto j = nlohmann::json::parse(spectrum_json(s));
    CHECK(j["metadata"]["engine"] == "analytic");
    CHECK(j["rho33_au"][1].get<double>() == 1.0 / 3.0);
    CHECK(format_number(-0.0) == "0");

    // Written spectra read back as measured data.
    const auto back = parse_spectrum(csv, "roundtrip.csv", std::nullopt, Channel::rho33);
    CHECK(back.delta1_MHz == s.delta1_MHz);
    CHECK(back.signal[2] == 2.0);
  }
}
