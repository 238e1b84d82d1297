#include "squeeze/squeezing.hpp"

#include <cmath>
#include <numbers>

#include "squeeze/errors.hpp"

namespace squeeze {

const char* to_string(Protocol p) { return p == Protocol::OAT ? "OAT" : "TAT"; }

Protocol protocol_from_string(const std::string& s) {
  if (s == "oat" || s == "OAT") return Protocol::OAT;
  if (s == "tat" || s == "TAT") return Protocol::TAT;
  throw ConfigError("unknown protocol '" + s + "' (expected oat or tat)", {{"protocol", s}});
}

double to_db(double xi2) { return -10.0 * std::log10(xi2); }

QuadratureExtremes quadrature_extremes(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double half_diff = 0.5 * (a - c);
  const double r = std::hypot(half_diff, b);
  QuadratureExtremes q{};
  q.var_max = mean + r;
  // det/λmax avoids cancellation for strongly squeezed ellipses.
  const double det = a * c - b * b;
  q.var_min = q.var_max > 0.0 ? det / q.var_max : mean - r;
  q.isotropic = r <= 1e-14 * std::abs(mean);
  if (q.isotropic) {
    q.theta = 0.0;
    return q;
  }
  // V(θ) = mean + half_diff·cos2θ + b·sin2θ is smallest where (cos2θ, sin2θ) ∥ −(half_diff, b).
  double theta = 0.5 * std::atan2(-b, -half_diff);
  if (theta < 0.0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta -= std::numbers::pi;
  q.theta = theta;
  return q;
}

double quadrature_variance(double a, double b, double c, double theta) {
  const double cs = std::cos(theta), sn = std::sin(theta);
  return a * cs * cs + 2.0 * b * sn * cs + c * sn * sn;
}

} // namespace squeeze
