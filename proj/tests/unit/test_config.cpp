#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "optgauge/config.hpp"

using namespace optgauge;
using nlohmann::json;

namespace {

std::string error_field(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

json minimal() { return json{{"modes", {{"frequencies", {1.0, 20.0}}, {"coupling", 0.6}}}}; }

}  // namespace

TEST_CASE("minimal config gets the documented defaults") {
  const RunConfig c = parse_config(minimal());
  CHECK(c.potential.gamma() == doctest::Approx(64.0));
  CHECK(c.mode_count() == 2);
  CHECK(c.gauge == GaugeVector{1.0, 1.0});
  CHECK(c.basis == BasisKind::bare);
  CHECK(c.levels == 2);
  CHECK(c.energies == 7);
  CHECK(c.eigen_count() == 8);
  CHECK(c.tol == 1e-6);
  CHECK(c.axes.empty());
}

TEST_CASE("full config parses") {
  json doc = minimal();
  doc["potential"] = {{"type", "double_well"}, {"B", 4.0}, {"C", 1.0}, {"shift", 0.5}};
  doc["gauge"] = {0.2, 0.8};
  doc["sweep"] = {{"axes", {{{"range", {0.0, 1.0}}, {"steps", 11}}, 1.0}},
                  {"metrics", {"sigma", "entropy_gap"}},
                  {"fidelity", false}};
  doc["truncation"] = {{"basis", "renormalized"}, {"levels", 3}, {"energies", 5}};
  doc["numerics"] = {{"cutoffs", {12, 6}},
                     {"tol", 1e-7},
                     {"grid", {{"n_points", 64}, {"scheme", "central_difference"}}}};
  doc["output"] = "results";
  const RunConfig c = parse_config(doc);
  CHECK(c.potential.shift == 0.5);
  CHECK(c.gauge == GaugeVector{0.2, 0.8});
  REQUIRE(c.axes.size() == 2);
  CHECK(c.axes[0].steps == 11);
  CHECK(c.axes[1].fixed);
  CHECK(c.metrics.size() == 2);
  CHECK_FALSE(c.compute_fidelity);
  CHECK(c.compute_entropy);
  CHECK(c.basis == BasisKind::renormalized);
  CHECK(c.levels == 3);
  CHECK(c.cutoffs == std::vector<int>{12, 6});
  REQUIRE(c.grid.has_value());
  CHECK(c.grid->n_points == 64);
  CHECK(c.grid->scheme == Discretization::central_difference);
  CHECK(c.output == "results");
}

TEST_CASE("errors name the offending field") {
  json doc = minimal();
  doc["modes"]["frequencies"] = {1.0, -2.0};
  CHECK(error_field(doc) == "/modes/frequencies/1");

  doc = minimal();
  doc["modes"].erase("coupling");
  CHECK(error_field(doc) == "/modes/coupling");

  doc = minimal();
  doc["numerics"] = {{"cutofs", 4}};
  CHECK(error_field(doc) == "/numerics/cutofs");

  doc = minimal();
  doc["sweep"] = {{"axes", {0.5}}};
  CHECK(error_field(doc) == "/sweep/axes");

  doc = minimal();
  doc["sweep"] = {{"axes", {0.5, 0.5}}, {"metrics", {"speed"}}};
  CHECK(error_field(doc) == "/sweep/metrics/0");

  doc = minimal();
  doc["potential"] = {{"gamma", 64}, {"B", 4}};
  CHECK(error_field(doc) == "/potential");

  doc = minimal();
  doc["gauge"] = {0.5};
  CHECK(error_field(doc) == "/gauge");

  doc = minimal();
  doc["truncation"] = {{"levels", 1}};
  CHECK(error_field(doc) == "/truncation/levels");

  CHECK(error_field(json::array()) == "/");
}

TEST_CASE("canonical JSON round trip and hashing") {
  json doc = minimal();
  doc["sweep"] = {{"axes", {{{"range", {0.0, 1.0}}, {"steps", 5}}, {{"fixed", 1.0}}}}};
  const RunConfig c = parse_config(doc);
  const json canon = to_json(c);
  CHECK(to_json(parse_config(canon)) == canon);
  CHECK(config_hash(parse_config(canon)) == config_hash(c));

  // Output location and sweep axes do not enter the physics hash.
  RunConfig d = c;
  d.output = "elsewhere";
  d.axes.clear();
  CHECK(config_hash(d) == config_hash(c));
  d.coupling = 0.61;
  CHECK(config_hash(d) != config_hash(c));
  CHECK(config_hash(c).size() == 64);
}

TEST_CASE("SHA-256 of a known string") {
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config files: comments, syntax errors and tabulated potentials") {
  const auto dir = std::filesystem::temp_directory_path() / "optgauge_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream t(dir / "well.dat");
    t << "# x V\n";
    for (int i = -200; i <= 200; ++i) {
      const double x = i * 0.025;
      t << x << ' ' << x * x * x * x - 4 * x * x << '\n';
    }
  }
  {
    std::ofstream f(dir / "run.json");
    f << "{\n  // tabulated well\n  \"potential\": {\"type\": \"tabulated\", \"file\": \""
      << (dir / "well.dat").string()
      << "\"},\n  \"modes\": {\"frequencies\": [1.0], \"coupling\": 0.5}\n}\n";
  }
  const RunConfig c = load_config(dir / "run.json");
  CHECK(std::holds_alternative<Tabulated>(c.potential.kind));
  CHECK(c.potential(1.0) == doctest::Approx(-3.0).epsilon(1e-6));
  {
    std::ofstream f(dir / "broken.json");
    f << "{\"modes\": ";
  }
  CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("potential section alone") {
  CHECK(parse_potential_section(json::object()).gamma() == doctest::Approx(64.0));
  const json doc{{"potential", {{"type", "harmonic"}, {"omega0", 2.0}}}, {"other", 1}};
  CHECK(std::holds_alternative<Harmonic>(parse_potential_section(doc).kind));
}

TEST_CASE("resolved system and settings") {
  json doc = minimal();
  doc["numerics"] = {{"cutoffs", 9}};
  const RunConfig c = parse_config(doc);
  const CavitySystem s = make_system(c);
  CHECK(s.modes[1].omega == doctest::Approx(20.0 * s.delta));
  CHECK(make_settings(c, s).cutoffs == std::vector<int>{9, 9});
  CHECK(make_targets(c, s).tol == doctest::Approx(1e-6 * s.delta));
  CHECK(make_targets(c, s).k == 8);
}
