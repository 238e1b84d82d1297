#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "squeeze/errors.hpp"

namespace squeeze {

struct ScalarMinimum {
  double x;
  double fx;
  int evaluations;
};

// Golden-section search for a minimum of f on [lo, hi]. A coarse scan first
// picks the sub-bracket around the best sample so mildly multimodal objectives
// still land on the global minimum of the scan resolution.
template <class F>
ScalarMinimum golden_minimize(F&& f, double lo, double hi, double xtol = 1e-6,
                              int scan_points = 64, int max_iter = 500) {
  if (!(hi > lo)) throw NumericalError("golden_minimize: empty bracket");
  int evals = 0;
  auto eval = [&](double x) {
    ++evals;
    const double v = f(x);
    if (!std::isfinite(v))
      throw NumericalError("golden_minimize: objective not finite at x=" + std::to_string(x), x);
    return v;
  };

  double best_x = lo, best_f = eval(lo);
  const int n = scan_points < 2 ? 2 : scan_points;
  const double step = (hi - lo) / n;
  int best_i = 0;
  for (int i = 1; i <= n; ++i) {
    const double x = lo + i * step;
    const double v = eval(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
      best_i = i;
    }
  }
  double a = lo + std::max(best_i - 1, 0) * step;
  double b = lo + std::min(best_i + 1, n) * step;

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  int iter = 0;
  while (b - a > xtol) {
    if (++iter > max_iter)
      throw NumericalError("golden_minimize: no convergence, bracket [" + std::to_string(a) +
                               ", " + std::to_string(b) + "]",
                           b - a);
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = eval(x2);
    }
  }
  ScalarMinimum m{f1 < f2 ? x1 : x2, f1 < f2 ? f1 : f2, evals};
  if (best_f < m.fx) {
    m.x = best_x;
    m.fx = best_f;
  }
  return m;
}

} // namespace squeeze
