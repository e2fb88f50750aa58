#include <doctest.h>

#include <algorithm>
#include <charconv>
#include <cstring>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "transpin/cli.hpp"
#include "transpin/errors.hpp"
#include "transpin/observables.hpp"

using namespace transpin;
using namespace transpin::cli;

namespace {

json guided_doc() {
  return parse_config_text(R"({
    "mode": "guided",
    "guided": {
      "geometry": {"a": 0.0229, "b": 0.0102, "L": 0.05},
      "index": {"family": "TE", "m": 1, "n": 0},
      "omega_over_cutoff": 1.4142135623730951,
      "n_quanta": 1
    },
    "grid": {"nx": 9, "ny": 5}
  })");
}

std::string error_of(const json& doc) {
  try {
    config_from_json(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

}  // namespace

TEST_CASE("guided config resolves frequency and amplitude") {
  const RunConfig cfg = config_from_json(guided_doc());
  CHECK(cfg.kind == ModeKind::Guided);
  CHECK(cfg.nx == 9);
  CHECK(cfg.ny == 5);
  const double wc = cutoff_frequency(cfg.guided.geometry, cfg.guided.index);
  CHECK(cfg.guided.omega == doctest::Approx(std::sqrt(2.0) * wc).epsilon(1e-15));
  CHECK(cfg.guided.amplitude_h == doctest::Approx(amplitude_for_quanta(1, cfg.guided)).epsilon(1e-15));
}

TEST_CASE("config diagnostics name the offending key") {
  SUBCASE("malformed JSON") {
    try {
      parse_config_text(R"({"mode": "guided", "guided": {"omega": 1.0,, "n_quanta": 1}})");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(contains(e.what(), "after key 'omega'"));
    }
  }
  SUBCASE("unknown key") {
    json doc = guided_doc();
    doc["guided"]["omgea"] = 1.0;
    CHECK(contains(error_of(doc), "'guided.omgea': unknown key"));
  }
  SUBCASE("rejected mode") {
    json doc = guided_doc();
    doc["guided"]["index"]["family"] = "TM";
    CHECK(contains(error_of(doc), "'guided.index'"));
  }
  SUBCASE("conflicting keys") {
    json doc = guided_doc();
    doc["guided"]["omega"] = 1e11;
    CHECK(contains(error_of(doc), "conflicts"));
  }
  SUBCASE("missing frequency") {
    json doc = guided_doc();
    doc["guided"].erase("omega_over_cutoff");
    CHECK(contains(error_of(doc), "'guided.omega': required"));
  }
  SUBCASE("bad grid") {
    json doc = guided_doc();
    doc["grid"]["nx"] = 1;
    CHECK(contains(error_of(doc), "grid.nx"));
  }
  SUBCASE("surface below the critical angle") {
    json doc = parse_config_text(
        R"({"mode": "surface", "surface": {"family": "TE", "eta": 1.2, "phi_deg": 40, "omega": 3e15}})");
    CHECK(contains(error_of(doc), "surface.phi_deg"));
  }
  SUBCASE("paper-figures with an explicit amplitude") {
    json doc = guided_doc();
    doc["normalize"] = "paper-figures";
    CHECK(contains(error_of(doc), "'normalize'"));
  }
}

TEST_CASE("flag overrides") {
  json doc = guided_doc();
  apply_overrides(doc, {{"omega", "9e10"}, {"index-n", "1"}, {"amplitude-h", "2.5"}, {"nx", "3"}});
  const RunConfig cfg = config_from_json(doc);
  CHECK(cfg.guided.omega == 9e10);
  CHECK(cfg.guided.index.n == 1);
  CHECK(cfg.guided.amplitude_h == 2.5);
  CHECK(cfg.nx == 3);
  CHECK_FALSE(doc["guided"].contains("omega_over_cutoff"));
  CHECK_FALSE(doc["guided"].contains("n_quanta"));

  json empty = json::object();
  apply_overrides(empty, {{"mode", "surface"}, {"family", "TM"}, {"eta", "1.5"}, {"phi-deg", "60"},
                          {"omega", "3e15"}});
  const RunConfig s = config_from_json(empty);
  CHECK(s.kind == ModeKind::Surface);
  CHECK(s.surface.eta == 1.5);

  json g = guided_doc();
  CHECK_THROWS_AS(apply_overrides(g, {{"eta", "1.5"}}), ConfigError);
  CHECK_THROWS_AS(apply_overrides(g, {{"nx", "four"}}), ConfigError);
  CHECK_THROWS_AS(apply_overrides(g, {{"bogus", "1"}}), ConfigError);
  CHECK(override_flags().size() == 23);
}

TEST_CASE("paper-figures normalization") {
  json doc = parse_config_text(R"({
    "mode": "guided", "units": "natural", "normalize": "paper-figures",
    "guided": {"geometry": {"a": 1, "b": 1, "L": 1}, "index": {"family": "TE", "m": 1, "n": 0},
               "omega_over_cutoff": 2}
  })");
  const RunConfig cfg = config_from_json(doc);
  const GuidedModeParams p = guided_params(cfg.guided);
  const auto& k = cfg.guided.constants;
  const double h = cfg.guided.amplitude_h;
  CHECK(kPi * p.k_z.real() * h * h / (2.0 * k.mu0 * p.omega_c * p.omega_c * cfg.guided.omega) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("spin map layout") {
  RunConfig cfg = config_from_json(guided_doc());
  const auto rows = spin_map(cfg);
  REQUIRE(rows.size() == 45);
  CHECK(rows[0].x == 0.0);
  CHECK(rows[0].y == 0.0);
  CHECK(rows[8].x == cfg.guided.geometry.a);
  CHECK(rows[9].x == 0.0);
  CHECK(rows[9].y == doctest::Approx(cfg.guided.geometry.b / 4));
  for (const auto& r : rows) CHECK(r.magnitude == r.s.norm());

  const auto serial = spin_map(cfg, false);
  REQUIRE(serial.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(serial[i].s == rows[i].s);

  const std::string csv = spin_map_csv(rows);
  CHECK(csv.rfind("x,y,sx,sy,sz,mag\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 46);
}

TEST_CASE("shortest round-trip number format") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int k = 0; k < 2000; ++k) {
    const std::uint64_t b = bits(rng);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
}

TEST_CASE("reports") {
  const json g = report_json(config_from_json(guided_doc()));
  CHECK(g.at("S_perp_over_hbar").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g.at("propagating") == true);
  CHECK(g.contains("mass"));
  CHECK(g.contains("mass_residuals"));

  const json s = report_json(config_from_json(parse_config_text(R"({
    "mode": "surface",
    "surface": {"family": "TM", "eta": 1.5, "phi_deg": 60, "omega": 2.9757e15, "area_A": 1e-12}
  })")));
  CHECK(s.at("tan_theta_prime").get<double>() == doctest::Approx(0.63828473850422541).epsilon(1e-14));
  CHECK(s.at("quantized_S_y_over_hbar").get<double>() ==
        doctest::Approx(s.at("S_y_over_hbar").get<double>()).epsilon(1e-9));

  json below = guided_doc();
  below["guided"]["omega_over_cutoff"] = 0.8;
  below["guided"].erase("n_quanta");
  below["guided"]["amplitude_h"] = 1.0;
  const json e = report_json(config_from_json(below));
  CHECK(e.at("propagating") == false);
  CHECK_FALSE(e.contains("observables"));
}

TEST_CASE("output destination") {
  std::ostringstream out;
  write_output("-", "abc", out);
  write_output("", "def", out);
  CHECK(out.str() == "abcdef");
  CHECK_THROWS_AS(write_output("/nonexistent-dir/x.csv", "abc", out), IoError);
  CHECK_THROWS_AS(load_config_file("/nonexistent-dir/cfg.json"), IoError);
  const json fig = load_config_file(TRANSPIN_FIXTURE_DIR "/te10_figure.json");
  CHECK(fig.at("normalize") == "paper-figures");
}

TEST_CASE("verification filter") {
  const auto surface = run_checks("surface/");
  REQUIRE_FALSE(surface.empty());
  for (const auto& r : surface) {
    CHECK(r.name.rfind("surface/", 0) == 0);
    CHECK(r.passed);
  }
  CHECK(run_checks("no-such-check").empty());
  std::ostringstream table;
  print_check_table({{"x/y", 1.0, 2.0, 0.1, false}}, table);
  CHECK(contains(table.str(), "x/y"));
  CHECK(contains(table.str(), "FAIL"));
}
