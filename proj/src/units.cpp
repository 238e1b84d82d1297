#include "squeeze/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "squeeze/errors.hpp"

namespace squeeze {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double unit_scale(std::string_view unit, std::string_view whole) {
  if (unit.empty()) return 1.0;
  double prefix = 1.0;
  std::string_view base = unit;
  if (unit != "s" && unit.size() > 1 && unit != "Hz") {
    switch (unit.front()) {
    case 'G': prefix = 1e9; break;
    case 'M': prefix = 1e6; break;
    case 'k': prefix = 1e3; break;
    case 'm': prefix = 1e-3; break;
    case 'u': prefix = 1e-6; break;
    case 'n': prefix = 1e-9; break;
    default: prefix = 0.0; break;
    }
    base = unit.substr(1);
  }
  if (prefix == 0.0 || (base != "Hz" && base != "s"))
    throw ConfigError("unrecognised unit '" + std::string(unit) + "' in '" + std::string(whole) +
                      "'");
  return prefix;
}

double parse_factor(std::string_view f, std::string_view whole) {
  f = trim(f);
  if (f == "pi") return std::numbers::pi;
  if (f == "2pi") return 2.0 * std::numbers::pi;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
  if (ec != std::errc() || ptr == f.data())
    throw ConfigError("cannot parse quantity '" + std::string(whole) + "'");
  std::string_view rest = trim(f.substr(static_cast<std::size_t>(ptr - f.data())));
  return value * unit_scale(rest, whole);
}

} // namespace

double parse_quantity(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ConfigError("empty quantity");
  double result = 1.0;
  if (s.starts_with("(2pi)")) {
    result = 2.0 * std::numbers::pi;
    s = trim(s.substr(5));
  }
  std::size_t start = 0;
  while (true) {
    std::size_t star = s.find('*', start);
    result *= parse_factor(s.substr(start, star - start), text);
    if (star == std::string_view::npos) break;
    start = star + 1;
  }
  if (!std::isfinite(result))
    throw ConfigError("quantity '" + std::string(text) + "' is not finite");
  return result;
}

} // namespace squeeze
