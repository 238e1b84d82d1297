#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "squeeze/commands.hpp"
#include "squeeze/errors.hpp"
#include "squeeze/io.hpp"
#include "squeeze/svg.hpp"

using namespace squeeze;
using io::json;

namespace {

const std::string kConfigs = SQUEEZE_CONFIGS;

json minimal_config() {
  return {{"rabi_frequency", 1.0}, {"cavity_coupling", 1.0}, {"detuning", 10.0},
          {"two_photon_detuning", 1.0}, {"interaction_time", 1.0}, {"atom_number", 100}};
}

std::vector<std::string> field_names(const ConfigError& e) {
  std::vector<std::string> names;
  for (const auto& f : e.fields()) names.push_back(f.name);
  return names;
}

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Counts opening and closing tags by name; self-closing tags are ignored.
bool tags_balanced(const std::string& doc) {
  std::map<std::string, int> depth;
  std::size_t i = 0;
  while ((i = doc.find('<', i)) != std::string::npos) {
    const std::size_t end = doc.find('>', i);
    if (end == std::string::npos) return false;
    const std::string tag = doc.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.empty() || tag[0] == '?' || tag[0] == '!' || tag.back() == '/') continue;
    const bool closing = tag[0] == '/';
    const std::string name = tag.substr(closing ? 1 : 0, tag.find_first_of(" \t\n") -
                                                             (closing ? 1 : 0));
    depth[name] += closing ? -1 : 1;
    if (depth[name] < 0) return false;
  }
  for (const auto& [name, d] : depth)
    if (d != 0) return false;
  return true;
}

} // namespace

TEST_CASE("format_number: 12 significant digits, signed zero folded") {
  CHECK(io::format_number(0.0) == "0");
  CHECK(io::format_number(-0.0) == "0");
  CHECK(io::format_number(1.0) == "1");
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(io::format_number(-2.5e-17) == "-2.5e-17");
  CHECK(io::format_number(6000.0 / M_PI) == "1909.8593171");
  CHECK(io::format_number(std::nan("")) == "nan");
  CHECK(io::format_number(INFINITY) == "inf");
  CHECK(io::format_number(-INFINITY) == "-inf");
  CHECK(io::rounded(1.0 / 3.0) == 0.333333333333);
  CHECK(io::rounded(0.0) == 0.0);
}

TEST_CASE("CsvTable keeps every row the header's width") {
  io::CsvTable t({"a", "b", "c"});
  t.add_row(std::vector<double>{1.0, -0.0, 0.25});
  t.add_row(std::vector<std::string>{"x", "y", "z"});
  CHECK(t.rows() == 2);
  CHECK(t.str() == "a,b,c\n1,0,0.25\nx,y,z\n");
  CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0, 2.0}), std::logic_error);
  CHECK_THROWS_AS(t.add_row(std::vector<std::string>{"1", "2", "3", "4"}), std::logic_error);
  CHECK(t.rows() == 2);
}

TEST_CASE("CSS state JSON golden form and round trip") {
  const auto s = dicke::css_state(2);
  const json j = io::state_to_json(s);
  const json golden = json::parse(
      R"({"S": 1, "amplitudes": [[0.5, 0], [0.707106781187, 0], [0.5, 0]]})");
  CHECK(j == golden);
  CHECK(io::dump(j) ==
        "{\n  \"S\": 1,\n  \"amplitudes\": [\n    [\n      0.5,\n      0.0\n    ],\n"
        "    [\n      0.707106781187,\n      0.0\n    ],\n    [\n      0.5,\n      0.0\n    ]\n  ]\n}\n");
  CHECK(io::state_to_json(dicke::css_state(3))["S"].dump() == "1.5");

  const auto back = io::state_from_json(j);
  CHECK(back.atoms() == 2);
  CHECK(std::abs(back.amplitudes().norm() - 1.0) < 1e-15);
  CHECK((back.amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(io::state_to_json(back) == j);

  CHECK_THROWS_AS(io::state_from_json(json::parse(R"({"S": 0.7, "amplitudes": [[1,0]]})")),
                  ConfigError);
  CHECK_THROWS_AS(io::state_from_json(json::parse(R"({"amplitudes": [[1,0]]})")), ConfigError);
  CHECK_THROWS(io::state_from_json(json::parse(R"({"S": 1, "amplitudes": [[1,0],[1,0],[1,0]]})")));
}

TEST_CASE("params_from_json accepts numbers and quantity strings") {
  json j = minimal_config();
  auto p = io::params_from_json(j);
  CHECK(p.rabi_frequency == 1.0);
  CHECK(p.atom_number == 100);
  CHECK(p.atomic_decay == 0.0);

  j["rabi_frequency"] = "2pi*100kHz";
  j["interaction_time"] = "0.3us";
  j["atomic_decay"] = 0.5;
  p = io::params_from_json(j);
  CHECK(p.rabi_frequency == doctest::Approx(2.0 * M_PI * 1e5).epsilon(1e-14));
  CHECK(p.interaction_time == doctest::Approx(0.3e-6).epsilon(1e-14));
  CHECK(p.atomic_decay == 0.5);
}

TEST_CASE("params_from_json reports every bad field") {
  json j = minimal_config();
  j.erase("detuning");
  j.erase("atom_number");
  j["colour"] = 3;
  j["rabi_frequency"] = "12 furlongs";
  try {
    io::params_from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const auto names = field_names(e);
    CHECK(has(names, "detuning"));
    CHECK(has(names, "atom_number"));
    CHECK(has(names, "colour"));
    CHECK(has(names, "rabi_frequency"));
  }

  json frac = minimal_config();
  frac["atom_number"] = 10.5;
  CHECK_THROWS_AS(io::params_from_json(frac), ConfigError);

  json zero_detuning = minimal_config();
  zero_detuning["detuning"] = 0.0;
  try {
    io::params_from_json(zero_detuning);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(has(field_names(e), "detuning"));
  }

  CHECK_THROWS_AS(io::params_from_json(json::array()), ConfigError);
}

TEST_CASE("JSON parse errors carry line and column") {
  const std::string text = "{\n  \"detuning\": 10,\n  \"g\": ]\n}\n";
  try {
    io::parse_json_text(text, "cfg.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.rfind("cfg.json:3:", 0) == 0);
    REQUIRE(e.fields().size() == 1);
    CHECK(e.fields()[0].name == "config");
  }
  CHECK(io::parse_json_text("{\"a\": 1}", "x")["a"] == 1);
}

TEST_CASE("shipped configs load") {
  const auto p = io::load_params(kConfigs + "/reference.json");
  CHECK(p.atom_number == 5000000);
  CHECK(p.interaction_time == doctest::Approx(0.3e-6).epsilon(1e-14));
  const auto q = io::load_params(kConfigs + "/dicke_n100.json");
  CHECK(q.atom_number == 100);
  CHECK_THROWS_AS(io::load_params(kConfigs + "/does_not_exist.json"), ConfigError);
}

TEST_CASE("write_text and ensure_directory") {
  const auto dir = std::filesystem::temp_directory_path() / "squeeze_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  io::ensure_directory(dir);
  io::write_text(dir / "a.txt", "hello\n");
  std::ifstream is(dir / "a.txt");
  std::stringstream ss;
  ss << is.rdbuf();
  CHECK(ss.str() == "hello\n");
  std::filesystem::remove_all(dir.parent_path());

  try {
    io::ensure_directory("/proc/squeeze_cannot_exist/x");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(has(field_names(e), "output_dir"));
  }
}

TEST_CASE("to_json of effective parameters") {
  PhysicalParams p;
  p.rabi_frequency = 2.0;
  p.cavity_coupling = 1.0;
  p.detuning = 10.0;
  p.two_photon_detuning = 1.0;
  p.interaction_time = 1.0;
  p.atom_number = 100;
  const json j = io::to_json(derive_effective(p));
  for (const char* key : {"kappa0", "chi0", "eta", "eta0", "alpha", "r0", "regime_flags"})
    CHECK(j.contains(key));
  CHECK(j["chi0"].get<double>() == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("parse_range") {
  const auto r = cli::parse_range("0:1:0.25", "alpha");
  REQUIRE(r.size() == 5);
  CHECK(r.front() == 0.0);
  CHECK(r.back() == doctest::Approx(1.0));
  CHECK(cli::parse_range("0:8:0.1", "alpha").size() == 81);
  CHECK(cli::parse_range("0:0.3:0.01", "eta0").size() == 31);
  CHECK(cli::parse_range("2.5", "alpha") == std::vector<double>{2.5});
  for (const char* bad : {"1:0:0.1", "0:1:0", "0:1:-1", "a:b:c", "0:1", ""}) {
    try {
      cli::parse_range(bad, "alpha");
      FAIL("expected ConfigError for " << bad);
    } catch (const ConfigError& e) {
      CHECK(has(field_names(e), "alpha"));
    }
  }
}

TEST_CASE("SVG output is well formed and escaped") {
  svg::LinePlot plot{"a < b & c", "x", "y", true};
  svg::Series s;
  s.label = "\"quoted\"";
  s.x = {10, 100, 1000};
  s.y = {1, 2, 3};
  s.marker = svg::Marker::Diamond;
  plot.series.push_back(s);
  const std::string doc = plot.render();
  CHECK(doc.find("<svg") != std::string::npos);
  CHECK(doc.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(doc.find("&quot;quoted&quot;") != std::string::npos);
  CHECK(doc.find("a < b") == std::string::npos);
  CHECK(tags_balanced(doc));
  CHECK(doc.find("nan") == std::string::npos);

  svg::Heatmap map{"h", "x", "y", {0, 1, 2}, {0, 1}, {-1, 0, 1, 0.5, -0.5, 0}};
  const std::string hm = map.render();
  CHECK(tags_balanced(hm));
  CHECK(hm.find("<rect") != std::string::npos);

  CHECK(svg::escape("<&>\"'") == "&lt;&amp;&gt;&quot;&apos;");
  CHECK(svg::diverging_color(0.0) == "#ffffff");
  CHECK(svg::diverging_color(-1.0) != svg::diverging_color(1.0));
}
