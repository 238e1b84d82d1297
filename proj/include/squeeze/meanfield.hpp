#pragma once

// First-cumulant (c-number) integration of the three-level + cavity
// Maxwell–Bloch equations in the frame rotating with the drive and the cavity.
// Operator products are factorised and Langevin forces dropped; the engine
// exists to check the adiabatically eliminated rates, not to produce squeezing.

#include <complex>
#include <vector>

#include "squeeze/params.hpp"

namespace squeeze::meanfield {

using cd = std::complex<double>;

// Collective quantities, σ₁₁ + σ₂₂ + σ₃₃ = N.
struct AtomFieldState {
  double t = 0.0;
  double sigma11 = 0.0;
  double sigma22 = 0.0;
  double sigma33 = 0.0;
  cd sigma12;
  cd sigma13;
  cd sigma23;
  cd epsilon; // cavity amplitude

  double sz() const { return 0.5 * (sigma11 - sigma22); }
  double population() const { return sigma11 + sigma22 + sigma33; }
};

using Series = std::vector<AtomFieldState>;

struct MBConfig {
  PhysicalParams params;
  bool include_decay = false;    // γ on the excited state, κ on the cavity
  double initial_tilt = 1.5707963267948966; // polar angle of the initial CSS (π/2: on the equator)
  bool include_rotation = false; // Ω₀ terms
  bool adiabatic_start = true;   // start from the drive-dressed state (σ₃₃ > 0, fast variables settled)
  // Integrate in a frame shifted by ν (Δ → Δ−ν, δ → δ+ν, Ω → Ωe^{iνt}); output is
  // always reported in the standard frame.
  double frame_offset = 0.0;
  double rel_tol = 1e-9;
  double abs_tol = 0.0; // 0: 1e-12·N
  long max_steps = 20'000'000;
};

AtomFieldState initial_state(const MBConfig& cfg);

// Samples at `samples` + 1 evenly spaced times in [0, duration].
Series integrate_mb(const MBConfig& cfg, double duration, int samples);

// −d arg σ₁₂/dt and −d ln|σ₁₂|/dt by least squares over samples with t ≥ t_from.
double rotation_rate(const Series& s, double t_from = 0.0);
double decay_rate(const Series& s, double t_from = 0.0);
double mean_sz(const Series& s, double t_from = 0.0);

struct RateOptions {
  double duration = 0.0; // 0: 10/χ₀
  int samples = 400;
  double transient_fraction = 0.05;
  double tilt_equator = 1.5707963267948966;
  double tilt_shifted = 1.0471975511965976; // ⟨Sz⟩ = N/4
};

struct RateReport {
  double chi_eff = 0.0;
  double kappa_eff = 0.0;
  double eta_eff = 0.0;
  double chi0 = 0.0;
  double kappa0 = 0.0;
  double eta = 0.0;
  double chi_rel = 0.0; // χ_eff/χ₀ − 1
  double kappa_rel = 0.0;
  double eta_rel = 0.0;
  double sz[2] = {0.0, 0.0};
  double rate[2] = {0.0, 0.0};
};

// Rotation rate of σ₁₂ is modelled as χ + 2κ⟨Sz⟩ (mean-field form of the
// −χ₀Sz − κ₀(Sz + Sz²) Hamiltonian). Two tilts separate χ_eff from κ_eff; the
// decay of |σ₁₂| at the equatorial tilt gives η_eff.
RateReport extract_rates(const MBConfig& base, const RateOptions& opt = {});

struct Residuals {
  double res13 = 0.0;
  double res23 = 0.0;
  double res_eps = 0.0;
};

// Largest deviation of σ₁₃, σ₂₃ and ε from their adiabatic expressions, relative
// to the largest magnitude of the expression, over samples with t > transient
// (default 5/Δ).
Residuals adiabatic_residuals(const Series& s, const PhysicalParams& p, double transient = -1.0);

} // namespace squeeze::meanfield
