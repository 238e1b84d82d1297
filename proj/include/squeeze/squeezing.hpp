#pragma once

#include <optional>
#include <string>

namespace squeeze {

enum class Protocol { OAT, TAT };

const char* to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);

struct SqueezingResult {
  double xi2 = 1.0;
  double theta = 0.0; // squeezed quadrature angle in [0, π), drift frame
  double db = 0.0;    // −10·log10(ξ²); positive means squeezing
  double var_min = 0.0;
  double var_max = 0.0;
  bool isotropic = false;
  std::string protocol;             // "OAT", "TAT", "dicke", "gaussian", ...
  std::optional<double> asymptote;  // large-α limit of the quantity, when known
};

double to_db(double xi2);

// Extremal variances of V(θ) = a·cos²θ + 2b·sinθcosθ + c·sin²θ and the minimising
// angle in [0, π). Ties (isotropic case) resolve to θ = 0.
struct QuadratureExtremes {
  double var_min;
  double var_max;
  double theta;
  bool isotropic;
};

QuadratureExtremes quadrature_extremes(double a, double b, double c);

double quadrature_variance(double a, double b, double c, double theta);

} // namespace squeeze
