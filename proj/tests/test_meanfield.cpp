#include <doctest.h>

#include <cmath>
#include <numbers>

#include "squeeze/errors.hpp"
#include "squeeze/meanfield.hpp"

using namespace squeeze;
using namespace squeeze::meanfield;

namespace {

// Experimental ratios in units of g, with N = 1000 and g scaled by √5000 so that
// the collective coupling g²N matches N = 5e6.
PhysicalParams scaled_ratios() {
  PhysicalParams p;
  p.cavity_coupling = std::sqrt(5000.0);
  p.rabi_frequency = 1e4;
  p.detuning = 1e5;
  p.two_photon_detuning = 500;
  p.atomic_decay = 100;
  p.cavity_decay = 100;
  p.atom_number = 1000;
  p.interaction_time = 0.0;
  return p;
}

// Same ratios with the drive lowered to Δ/50, so every regime flag holds.
PhysicalParams in_regime() {
  auto p = scaled_ratios();
  p.rabi_frequency = 2e3;
  return p;
}

MBConfig config(const PhysicalParams& p, bool decay = false) {
  MBConfig c;
  c.params = p;
  c.include_decay = decay;
  return c;
}

} // namespace

TEST_CASE("initial state is a tilted coherent state") {
  auto c = config(in_regime());
  c.initial_tilt = std::numbers::pi / 3;
  c.adiabatic_start = false;
  const auto s = initial_state(c);
  CHECK(s.sigma11 == doctest::Approx(750.0));
  CHECK(s.sigma22 == doctest::Approx(250.0));
  CHECK(s.sigma12.real() == doctest::Approx(500 * std::sin(std::numbers::pi / 3)));
  CHECK(s.sz() == doctest::Approx(250.0));
  CHECK(s.epsilon == cd(0.0));
}

TEST_CASE("no drive: nothing moves") {
  auto p = in_regime();
  p.rabi_frequency = 0.0;
  const auto series = integrate_mb(config(p, true), 0.01, 50);
  const auto& first = series.front();
  for (const auto& s : series) {
    CHECK(s.sigma11 == first.sigma11);
    CHECK(s.sigma22 == first.sigma22);
    CHECK(s.sigma33 == 0.0);
    CHECK(s.epsilon == cd(0.0));
    CHECK(s.sigma12 == first.sigma12);
  }
  const auto r = adiabatic_residuals(series, p);
  CHECK(r.res13 == 0.0);
  CHECK(r.res23 == 0.0);
  CHECK(r.res_eps == 0.0);
}

TEST_CASE("single-beam light shift without the cavity") {
  auto p = in_regime();
  p.cavity_coupling = 0.0;
  const double duration = 2e-3;
  const auto series = integrate_mb(config(p), duration, 400);
  // Exact two-level AC Stark shift of |1⟩: (√(Δ²+Ω²) − Δ)/2 → Ω²/4Δ.
  const double stark = 0.5 * (std::hypot(p.detuning, p.rabi_frequency) - p.detuning);
  CHECK(rotation_rate(series) == doctest::Approx(stark).epsilon(1e-6));
  CHECK(rotation_rate(series) == doctest::Approx(p.rabi_frequency * p.rabi_frequency / (4 * p.detuning)).epsilon(1e-3));
  const double m0 = std::abs(series.front().sigma12);
  for (const auto& s : series) CHECK(std::abs(std::abs(s.sigma12) - m0) < 1e-8 * m0);
}

TEST_CASE("population is conserved with decay routed back to the ground states") {
  for (bool decay : {false, true}) {
    auto c = config(scaled_ratios(), decay);
    c.adiabatic_start = false; // ringing populates σ₃₃ as much as possible
    const auto series = integrate_mb(c, 2e-3, 200);
    for (const auto& s : series) {
      CHECK(std::abs(s.population() - 1000.0) < 1e-8 * 1000.0);
      CHECK(std::norm(s.sigma12) <= s.sigma11 * s.sigma22 + 1e-6 * 1000.0);
    }
  }
}

TEST_CASE("excited-state population stays at the adiabatic bound") {
  const auto p = scaled_ratios();
  const auto series = integrate_mb(config(p, true), 4e-3, 400);
  const double bound = std::pow(p.rabi_frequency / (2 * p.detuning), 2);
  double max11 = 0.0, max33 = 0.0;
  for (const auto& s : series) {
    max11 = std::max(max11, s.sigma11);
    max33 = std::max(max33, s.sigma33);
  }
  CHECK(max33 / 1000.0 <= 1.05 * bound * max11 / 1000.0);
  CHECK(max33 / 1000.0 < 2e-3);
}

TEST_CASE("results do not depend on the rotating-frame offset") {
  auto base = config(in_regime(), true);
  base.include_rotation = true;
  base.params.rotation_rate = 3.0;
  auto shifted = base;
  shifted.frame_offset = 0.3 * base.params.two_photon_detuning;
  const auto a = integrate_mb(base, 5e-3, 100);
  const auto b = integrate_mb(shifted, 5e-3, 100);
  const double tol = 1e-8 * 1000.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i].sigma11 - b[i].sigma11) < tol);
    CHECK(std::abs(a[i].sigma22 - b[i].sigma22) < tol);
    CHECK(std::abs(a[i].sigma12 - b[i].sigma12) < tol);
    CHECK(std::abs(a[i].sigma13 - b[i].sigma13) < tol);
    CHECK(std::abs(a[i].sigma23 - b[i].sigma23) < tol);
    CHECK(std::abs(a[i].epsilon - b[i].epsilon) < 1e-8 * std::max(1.0, std::abs(a[i].epsilon)));
  }
}

TEST_CASE("rate extraction in the validity regime") {
  const auto p = in_regime();
  const auto c = config(p);
  const auto r = extract_rates(c);
  CHECK(std::abs(r.chi_rel) < 0.05);
  CHECK(std::abs(r.kappa_rel) < 0.10);
  CHECK(r.sz[1] == doctest::Approx(250.0).epsilon(0.01));
  CHECK(std::abs(r.sz[0]) < 1.0);
  // No decay channel: any fitted decay is integration noise.
  const double gamma_scale = r.chi0 * p.atomic_decay / p.detuning;
  CHECK(std::abs(r.eta_eff) < 1e-3 * gamma_scale + 1e-6 * r.chi0);

  SUBCASE("halving the tolerance barely moves the rates") {
    auto tight = c;
    tight.rel_tol = 0.5 * c.rel_tol;
    tight.abs_tol = 0.5e-12 * 1000.0;
    const auto t = extract_rates(tight);
    CHECK(std::abs(t.chi_eff / r.chi_eff - 1) < 1e-3);
    CHECK(std::abs(t.kappa_eff / r.kappa_eff - 1) < 1e-3);
  }
}

TEST_CASE("rate extraction with optical pumping") {
  const auto r = extract_rates(config(in_regime(), true));
  CHECK(std::abs(r.chi_rel) < 0.05);
  CHECK(r.eta_eff > 0.0);
}

TEST_CASE("adiabatic residuals") {
  const auto p = in_regime();
  const auto good = adiabatic_residuals(integrate_mb(config(p), 0.05, 500), p);
  CHECK(good.res13 < 0.05);
  CHECK(good.res23 < 0.05);
  CHECK(good.res_eps < 0.05);

  auto bad_p = p;
  bad_p.detuning /= 100;
  const auto bad = adiabatic_residuals(integrate_mb(config(bad_p), 0.05, 500), bad_p);
  CHECK(bad.res13 > 0.2);
  CHECK(bad.res13 > 4 * good.res13);
}

TEST_CASE("failures are reported") {
  auto c = config(scaled_ratios());
  c.max_steps = 100;
  CHECK_THROWS_AS(integrate_mb(c, 0.1, 10), NumericalError);

  auto dark = in_regime();
  dark.rabi_frequency = 0.0;
  CHECK_THROWS_AS(extract_rates(config(dark)), NumericalError);

  const auto short_series = integrate_mb(config(in_regime()), 1e-3, 5);
  CHECK_THROWS_AS(rotation_rate(short_series), NumericalError);

  auto invalid = in_regime();
  invalid.detuning = -1.0;
  CHECK_THROWS_AS(integrate_mb(config(invalid), 1e-3, 10), ConfigError);
}
