#pragma once

// Thin wrapper over odeint's dense-output Dormand–Prince stepper: adaptive steps,
// interpolated samples at requested times, and a hard step budget.

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <span>
#include <string>

#include "squeeze/errors.hpp"

namespace squeeze::ode {

struct Tolerances {
  double abs = 1e-12;
  double rel = 1e-10;
  long max_steps = 5'000'000;
};

// Integrates `system` from times.front() to times.back(); `observe(i, state)` is
// called for every sample (the first with the initial state). Times must be
// non-decreasing.
template <std::size_t N, class System, class Observer>
void integrate_sampled(System&& system, std::array<double, N> state, std::span<const double> times,
                       const Tolerances& tol, Observer&& observe, double first_step = 0.0) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, N>;
  if (times.empty()) return;
  observe(std::size_t{0}, state);
  const double t0 = times.front();
  const double t1 = times.back();
  if (t1 <= t0) {
    for (std::size_t i = 1; i < times.size(); ++i) observe(i, state);
    return;
  }
  auto stepper = odeint::make_dense_output(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());
  const double dt0 = first_step > 0.0 ? first_step : (t1 - t0) * 1e-6;
  stepper.initialize(state, t0, dt0);
  std::size_t next = 1;
  // Dense output is only valid after the first step; samples at t0 are exact.
  for (; next < times.size() && times[next] <= t0; ++next) observe(next, state);
  long steps = 0;
  State sample;
  while (next < times.size()) {
    while (next < times.size() && times[next] <= stepper.current_time()) {
      stepper.calc_state(times[next], sample);
      observe(next, sample);
      ++next;
    }
    if (next >= times.size()) break;
    if (++steps > tol.max_steps)
      throw NumericalError("ode: step budget of " + std::to_string(tol.max_steps) +
                               " exhausted at t=" + std::to_string(stepper.current_time()) +
                               "; the system is stiff on this time scale, reduce the window or "
                               "change frame",
                           stepper.current_time());
    stepper.do_step(system);
    for (double v : stepper.current_state())
      if (!std::isfinite(v))
        throw NumericalError("ode: state became non-finite at t=" +
                                 std::to_string(stepper.current_time()),
                             stepper.current_time());
  }
}

} // namespace squeeze::ode
