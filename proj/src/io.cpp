#include "squeeze/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "squeeze/errors.hpp"
#include "squeeze/units.hpp"

namespace squeeze::io {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double rounded(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  return std::stod(format_number(v));
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw std::logic_error("CsvTable: row has " + std::to_string(cells.size()) +
                           " cells, header has " + std::to_string(header_.size()));
  rows_.push_back(std::move(cells));
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_row(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void CsvTable::write(const std::filesystem::path& file) const { write_text(file, str()); }

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw ConfigError("cannot create output directory '" + dir.string() + "'",
                      {{"output_dir", ec ? ec.message() : "not a directory"}});
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("cannot write '" + file.string() + "'", {{"output_dir", "unwritable"}});
  os << text;
  if (!os) throw ConfigError("write failed for '" + file.string() + "'");
}

json to_json(const RegimeFlags& f) {
  return {{"weak_drive", f.weak_drive},       {"large_detuning", f.large_detuning},
          {"large_two_photon", f.large_two_photon}, {"small_r0", f.small_r0},
          {"small_eta0", f.small_eta0},       {"small_light_shift", f.small_light_shift}};
}

json to_json(const EffectiveParams& e) {
  return {{"kappa0", rounded(e.kappa0)}, {"chi0", rounded(e.chi0)}, {"eta", rounded(e.eta)},
          {"eta0", rounded(e.eta0)},     {"alpha", rounded(e.alpha)}, {"beta", rounded(e.beta)},
          {"r0", rounded(e.r0)},         {"phi0", rounded(e.phi0)},  {"spin", rounded(e.spin)},
          {"regime_flags", to_json(e.flags)}};
}

json to_json(const PhysicalParams& p) {
  return {{"rabi_frequency", rounded(p.rabi_frequency)},
          {"cavity_coupling", rounded(p.cavity_coupling)},
          {"detuning", rounded(p.detuning)},
          {"two_photon_detuning", rounded(p.two_photon_detuning)},
          {"atomic_decay", rounded(p.atomic_decay)},
          {"cavity_decay", rounded(p.cavity_decay)},
          {"atom_number", p.atom_number},
          {"rotation_rate", rounded(p.rotation_rate)},
          {"interaction_time", rounded(p.interaction_time)}};
}

json to_json(const SqueezingResult& r) {
  json j = {{"xi2", rounded(r.xi2)},           {"dB", rounded(r.db)},
            {"theta", rounded(r.theta)},       {"var_min", rounded(r.var_min)},
            {"var_max", rounded(r.var_max)},   {"isotropic", r.isotropic},
            {"protocol", r.protocol}};
  if (r.asymptote) j["asymptote"] = rounded(*r.asymptote);
  return j;
}

json state_to_json(const dicke::DickeState& s) {
  json amps = json::array();
  for (Eigen::Index k = 0; k < s.dim(); ++k)
    amps.push_back({rounded(s.amplitudes()[k].real()), rounded(s.amplitudes()[k].imag())});
  json spin = rounded(s.spin());
  if (s.atoms() % 2 == 0) spin = s.atoms() / 2;
  return {{"S", spin}, {"amplitudes", amps}};
}

dicke::DickeState state_from_json(const json& j) {
  try {
    const double spin = j.at("S").get<double>();
    const auto& amps = j.at("amplitudes");
    const long long atoms = std::llround(2.0 * spin);
    if (std::abs(2.0 * spin - static_cast<double>(atoms)) > 1e-9)
      throw ConfigError("state: S must be a half-integer", {{"S", "not a half-integer"}});
    Eigen::VectorXcd c(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t k = 0; k < amps.size(); ++k)
      c[static_cast<Eigen::Index>(k)] = {amps[k].at(0).get<double>(), amps[k].at(1).get<double>()};
    // Serialised amplitudes carry 12 digits; restore exact normalisation.
    if (std::abs(c.norm() - 1.0) < 1e-9) c /= c.norm();
    return dicke::DickeState(atoms, std::move(c));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("state: malformed JSON: ") + e.what());
  }
}

namespace {

const std::set<std::string>& known_fields() {
  static const std::set<std::string> names = {
      "rabi_frequency", "cavity_coupling", "detuning",      "two_photon_detuning",
      "atomic_decay",   "cavity_decay",    "atom_number",   "rotation_rate",
      "interaction_time"};
  return names;
}

} // namespace

PhysicalParams params_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  std::vector<ConfigError::Field> bad;
  PhysicalParams p;
  auto quantity = [&](const char* name, double& out, bool required) {
    if (!j.contains(name)) {
      if (required) bad.push_back({name, "missing"});
      return;
    }
    const auto& v = j.at(name);
    try {
      if (v.is_number())
        out = v.get<double>();
      else if (v.is_string())
        out = parse_quantity(v.get<std::string>());
      else
        bad.push_back({name, "expected a number or quantity string"});
    } catch (const ConfigError& e) {
      bad.push_back({name, e.what()});
    }
  };
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known_fields().count(it.key())) bad.push_back({it.key(), "unknown field"});
  quantity("rabi_frequency", p.rabi_frequency, true);
  quantity("cavity_coupling", p.cavity_coupling, true);
  quantity("detuning", p.detuning, true);
  quantity("two_photon_detuning", p.two_photon_detuning, true);
  quantity("atomic_decay", p.atomic_decay, false);
  quantity("cavity_decay", p.cavity_decay, false);
  quantity("rotation_rate", p.rotation_rate, false);
  quantity("interaction_time", p.interaction_time, true);
  if (!j.contains("atom_number")) {
    bad.push_back({"atom_number", "missing"});
  } else {
    const auto& v = j.at("atom_number");
    double n = 0.0;
    if (v.is_number())
      n = v.get<double>();
    else if (v.is_string()) {
      try {
        n = parse_quantity(v.get<std::string>());
      } catch (const ConfigError& e) {
        bad.push_back({"atom_number", e.what()});
      }
    }
    if (!(n >= 1.0) || n != std::floor(n) || n > 9e15)
      bad.push_back({"atom_number", "must be a positive integer"});
    else
      p.atom_number = static_cast<long long>(n);
  }
  if (!bad.empty()) {
    std::string msg = "config:";
    for (const auto& f : bad) msg += " " + f.name + " (" + f.message + ");";
    throw ConfigError(msg, std::move(bad));
  }
  validate(p);
  return p;
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line/column for the message.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": JSON parse error: " + e.what(),
                      {{"config", "parse error at line " + std::to_string(line) + ", column " +
                                      std::to_string(col)}});
  }
}

PhysicalParams load_params(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw ConfigError("cannot read config '" + file.string() + "'", {{"config", "unreadable"}});
  std::stringstream ss;
  ss << is.rdbuf();
  return params_from_json(parse_json_text(ss.str(), file.string()));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace squeeze::io
