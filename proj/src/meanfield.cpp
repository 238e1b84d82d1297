#include "squeeze/meanfield.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <numbers>

#include "squeeze/errors.hpp"
#include "squeeze/ode.hpp"

namespace squeeze::meanfield {
namespace {

using Packed = std::array<double, 11>;
constexpr cd I{0.0, 1.0};

Packed pack(const AtomFieldState& s) {
  return {s.sigma11,      s.sigma22,      s.sigma33,      s.sigma12.real(),
          s.sigma12.imag(), s.sigma13.real(), s.sigma13.imag(), s.sigma23.real(),
          s.sigma23.imag(), s.epsilon.real(), s.epsilon.imag()};
}

AtomFieldState unpack(const Packed& y, double t) {
  AtomFieldState s;
  s.t = t;
  s.sigma11 = y[0];
  s.sigma22 = y[1];
  s.sigma33 = y[2];
  s.sigma12 = {y[3], y[4]};
  s.sigma13 = {y[5], y[6]};
  s.sigma23 = {y[7], y[8]};
  s.epsilon = {y[9], y[10]};
  return s;
}

struct Rhs {
  double omega, g, delta_e, delta_c, gamma, kappa, omega0, nu;

  void operator()(const Packed& y, Packed& dy, double t) const {
    const double s11 = y[0], s22 = y[1], s33 = y[2];
    const cd s12{y[3], y[4]}, s13{y[5], y[6]}, s23{y[7], y[8]}, eps{y[9], y[10]};
    const cd s21 = std::conj(s12), s31 = std::conj(s13), s32 = std::conj(s23);
    const cd epsc = std::conj(eps);
    const cd om = nu == 0.0 ? cd(omega, 0.0) : omega * std::polar(1.0, nu * t);
    const cd omc = std::conj(om);
    const double sy = s12.imag(); // Sy = (σ₁₂ − σ₂₁)/2i
    const double sz = 0.5 * (s11 - s22);

    const cd d11 = I * om / 2.0 * s31 - I * omc / 2.0 * s13 + gamma * s33 - omega0 * sy;
    const cd d22 = I * g * eps * s32 - I * g * s23 * epsc + gamma * s33 + omega0 * sy;
    const cd d33 = I * omc / 2.0 * s13 - I * om / 2.0 * s31 + I * g * s23 * epsc -
                   I * g * eps * s32 - 2.0 * gamma * s33;
    const cd d12 = I * om / 2.0 * s32 - I * g * s13 * epsc + I * omega0 * sz;
    const cd deps = -kappa / 2.0 * eps - I * g * s23 + I * delta_c * eps;
    const cd d13 = -(I * delta_e + gamma) * s13 - I * om / 2.0 * (s11 - s33) - I * g * eps * s12 -
                   I * omega0 / 2.0 * s23;
    const cd d23 = -(I * delta_e + gamma) * s23 - I * g * eps * (s22 - s33) - I * om / 2.0 * s21 -
                   I * omega0 / 2.0 * s13;
    dy = {d11.real(),  d22.real(),  d33.real(),  d12.real(),  d12.imag(), d13.real(),
          d13.imag(), d23.real(),  d23.imag(),  deps.real(), deps.imag()};
  }
};

struct Fit {
  double slope;
  double intercept;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw NumericalError("fit: degenerate design (all abscissae equal)");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

std::vector<const AtomFieldState*> window(const Series& s, double t_from) {
  std::vector<const AtomFieldState*> w;
  for (const auto& a : s)
    if (a.t >= t_from) w.push_back(&a);
  if (w.size() < 10)
    throw NumericalError("rate fit: fewer than 10 samples in the fit window",
                         static_cast<double>(w.size()));
  return w;
}

} // namespace

AtomFieldState initial_state(const MBConfig& cfg) {
  const auto& p = cfg.params;
  const double n = static_cast<double>(p.atom_number);
  const double c = std::cos(0.5 * cfg.initial_tilt), sn = std::sin(0.5 * cfg.initial_tilt);
  AtomFieldState s;
  s.sigma11 = n * c * c;
  s.sigma22 = n * sn * sn;
  s.sigma12 = 0.5 * n * std::sin(cfg.initial_tilt);
  if (!cfg.adiabatic_start) return s;

  const double gamma = cfg.include_decay ? p.atomic_decay : 0.0;
  const double kappa = cfg.include_decay ? p.cavity_decay : 0.0;
  const double om = p.rabi_frequency, g = p.cavity_coupling;
  // The drive dresses |1⟩ exactly: each atom's |1⟩ amplitude becomes
  // cos φ|1⟩ − sin φ|3⟩ with tan 2φ = Ω/Δ, which keeps the state physical even
  // when Ω is not small against Δ.
  const double phi = 0.5 * std::atan2(om, p.detuning);
  const double cp = std::cos(phi), sp = std::sin(phi);
  s.sigma33 = s.sigma11 * sp * sp;
  s.sigma11 *= cp * cp;
  s.sigma12 *= cp;
  const cd s21 = std::conj(s.sigma12);
  const cd s13_drive = -n * c * c * sp * cp;
  const cd s23_drive = -std::tan(phi) * s21;
  // The cavity field and its back-action follow σ₂₁ ∝ e^{iωt}, where ω is the
  // rotation of σ₁₂ they help produce; solve for ω by fixed-point iteration.
  double omega = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const cd de13 = p.detuning - I * gamma;
    const cd de23 = p.detuning + omega - I * gamma;
    const cd dc = p.two_photon_detuning - omega + I * kappa / 2.0;
    s.epsilon = g * s23_drive / (dc + g * g * s.sigma22 / de23);
    s.sigma13 = s13_drive - g * s.epsilon * s.sigma12 / de13;
    s.sigma23 = s23_drive - g * s.epsilon * s.sigma22 / de23;
    if (std::abs(s.sigma12) == 0.0) break;
    const cd d12 = I * om / 2.0 * std::conj(s.sigma23) - I * g * s.sigma13 * std::conj(s.epsilon);
    const double next = -(d12 / s.sigma12).imag();
    if (!std::isfinite(next)) break;
    const bool converged = std::abs(next - omega) <= 1e-15 * std::max(1.0, std::abs(next));
    omega = next;
    if (converged) break;
  }
  return s;
}

Series integrate_mb(const MBConfig& cfg, double duration, int samples) {
  validate(cfg.params);
  if (!(duration >= 0.0) || samples < 1)
    throw ConfigError("integrate_mb: need duration >= 0 and at least one sample");
  const auto& p = cfg.params;
  const double nu = cfg.frame_offset;
  Rhs rhs{p.rabi_frequency,
          p.cavity_coupling,
          p.detuning - nu,
          p.two_photon_detuning + nu,
          cfg.include_decay ? p.atomic_decay : 0.0,
          cfg.include_decay ? p.cavity_decay : 0.0,
          cfg.include_rotation ? p.rotation_rate : 0.0,
          nu};

  std::vector<double> times(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) times[i] = duration * i / samples;

  const double n = static_cast<double>(p.atom_number);
  ode::Tolerances tol{cfg.abs_tol > 0.0 ? cfg.abs_tol : 1e-12 * n, cfg.rel_tol, cfg.max_steps};
  Series out(times.size());
  const double fastest = std::max({p.detuning, p.two_photon_detuning, p.rabi_frequency,
                                   std::abs(p.detuning - nu), std::abs(p.two_photon_detuning + nu)});
  ode::integrate_sampled<11>(
      rhs, pack(initial_state(cfg)), times, tol,
      [&](std::size_t i, const Packed& y) {
        AtomFieldState s = unpack(y, times[i]);
        if (nu != 0.0) {
          const cd back = std::polar(1.0, -nu * times[i]);
          s.sigma13 *= back;
          s.sigma23 *= back;
          s.epsilon *= back;
        }
        out[i] = s;
      },
      1e-3 / fastest);
  return out;
}

double rotation_rate(const Series& s, double t_from) {
  const auto w = window(s, t_from);
  std::vector<double> t, phase;
  double unwrapped = std::arg(w.front()->sigma12);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double raw = std::arg(w[i]->sigma12);
    if (i > 0) {
      double step = raw - std::arg(w[i - 1]->sigma12);
      step -= 2.0 * std::numbers::pi * std::round(step / (2.0 * std::numbers::pi));
      if (std::abs(step) > 0.5 * std::numbers::pi)
        throw NumericalError("rotation_rate: phase under-resolved between samples", step);
      unwrapped += step;
    }
    t.push_back(w[i]->t);
    phase.push_back(unwrapped);
  }
  return -least_squares(t, phase).slope;
}

double decay_rate(const Series& s, double t_from) {
  const auto w = window(s, t_from);
  std::vector<double> t, logabs;
  for (const auto* a : w) {
    const double m = std::abs(a->sigma12);
    if (!(m > 0.0)) throw NumericalError("decay_rate: coherence vanished");
    t.push_back(a->t);
    logabs.push_back(std::log(m));
  }
  return -least_squares(t, logabs).slope;
}

double mean_sz(const Series& s, double t_from) {
  const auto w = window(s, t_from);
  double acc = 0.0;
  for (const auto* a : w) acc += a->sz();
  return acc / static_cast<double>(w.size());
}

RateReport extract_rates(const MBConfig& base, const RateOptions& opt) {
  const EffectiveParams e = derive_effective(base.params);
  if (!(e.chi0 > 0.0)) throw NumericalError("extract_rates: no drive, rates are undefined");
  const double duration = opt.duration > 0.0 ? opt.duration : 10.0 / e.chi0;
  const double t_from = opt.transient_fraction * duration;

  auto run = [&](double tilt) {
    MBConfig c = base;
    c.initial_tilt = tilt;
    return integrate_mb(c, duration, opt.samples);
  };
  auto shifted = std::async(std::launch::async, run, opt.tilt_shifted);
  const Series equator = run(opt.tilt_equator);
  const Series tilted = shifted.get();

  RateReport r;
  r.chi0 = e.chi0;
  r.kappa0 = e.kappa0;
  r.eta = e.eta;
  r.sz[0] = mean_sz(equator, t_from);
  r.sz[1] = mean_sz(tilted, t_from);
  r.rate[0] = rotation_rate(equator, t_from);
  r.rate[1] = rotation_rate(tilted, t_from);
  const std::vector<double> x{r.sz[0], r.sz[1]}, y{r.rate[0], r.rate[1]};
  if (std::abs(r.sz[1] - r.sz[0]) < 1e-9 * static_cast<double>(base.params.atom_number))
    throw NumericalError("extract_rates: tilts give the same <Sz>, kappa is not identifiable");
  const double slope = (r.rate[1] - r.rate[0]) / (r.sz[1] - r.sz[0]);
  r.chi_eff = r.rate[0] - slope * r.sz[0];
  r.kappa_eff = 0.5 * slope;
  r.eta_eff = decay_rate(equator, t_from);
  r.chi_rel = r.chi_eff / e.chi0 - 1.0;
  r.kappa_rel = e.kappa0 > 0.0 ? r.kappa_eff / e.kappa0 - 1.0 : 0.0;
  r.eta_rel = e.eta > 0.0 ? r.eta_eff / e.eta - 1.0 : 0.0;
  return r;
}

Residuals adiabatic_residuals(const Series& s, const PhysicalParams& p, double transient) {
  const double t_skip = transient >= 0.0 ? transient : 5.0 / p.detuning;
  const double om = p.rabi_frequency, g = p.cavity_coupling;
  const double D = p.detuning, d = p.two_photon_detuning;
  double dev[3] = {0, 0, 0}, scale[3] = {0, 0, 0};
  for (const auto& a : s) {
    if (a.t <= t_skip) continue;
    const cd s21 = std::conj(a.sigma12);
    const cd f13 = -(om * a.sigma11 / 2.0 + g * a.epsilon * a.sigma12) / D;
    const cd f23 = -(om * s21 / 2.0 + g * a.epsilon * a.sigma22) / D;
    const cd feps = -g * om * s21 / (2.0 * D * d);
    const cd sim[3] = {a.sigma13, a.sigma23, a.epsilon};
    const cd ref[3] = {f13, f23, feps};
    for (int k = 0; k < 3; ++k) {
      dev[k] = std::max(dev[k], std::abs(sim[k] - ref[k]));
      scale[k] = std::max(scale[k], std::abs(ref[k]));
    }
  }
  auto rel = [](double dv, double sc) { return sc > 0.0 ? dv / sc : (dv > 0.0 ? dv : 0.0); };
  return {rel(dev[0], scale[0]), rel(dev[1], scale[1]), rel(dev[2], scale[2])};
}

} // namespace squeeze::meanfield
