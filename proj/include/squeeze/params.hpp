#pragma once

// Physical cavity/atom/laser inputs and the effective coupling constants of the
// adiabatically eliminated ground-state dynamics. All frequencies are angular
// (rad/s), times are in seconds.

#include <string>
#include <vector>

namespace squeeze {

struct PhysicalParams {
  double rabi_frequency = 0.0;      // Ω
  double cavity_coupling = 0.0;     // g
  double detuning = 0.0;            // Δ
  double two_photon_detuning = 0.0; // δ
  double atomic_decay = 0.0;        // γ
  double cavity_decay = 0.0;        // κ
  long long atom_number = 1;        // N
  double rotation_rate = 0.0;       // Ω₀, zero for pure one-axis twisting
  double interaction_time = 0.0;    // t

  double spin() const { return 0.5 * static_cast<double>(atom_number); }
};

// Advisory flags; the elimination is trusted less when any of these is false.
struct RegimeFlags {
  bool weak_drive = false;        // Ω/Δ < 0.2
  bool large_detuning = false;    // Δ/γ > 100
  bool large_two_photon = false;  // δ > 10·gΩ√N/(2Δ)
  bool small_r0 = false;          // r₀ < 0.2
  bool small_eta0 = false;        // η₀ < 0.2
  bool small_light_shift = false; // χ₀/δ < 0.2

  bool all() const {
    return weak_drive && large_detuning && large_two_photon && small_r0 && small_eta0 &&
           small_light_shift;
  }
};

struct EffectiveParams {
  double kappa0 = 0.0; // κ₀ = Ω²g²/(4δΔ²), cavity-mediated twisting rate
  double chi0 = 0.0;   // χ₀ = Ω²/(4Δ), light shift of |1⟩
  double eta = 0.0;    // η = χ₀γ/Δ, optical pumping rate
  double eta0 = 0.0;   // η₀ = 2ηt
  double alpha = 0.0;  // α = 2Sκ₀t ≥ 0
  double beta = 0.0;   // β = √S·φ₀·t
  double r0 = 0.0;     // r₀ = κ/(2δ)
  double phi0 = 0.0;   // φ₀ = χ₀ + κ₀
  double spin = 0.0;   // S = N/2
  RegimeFlags flags;
};

struct CavityGeometry {
  double finesse = 0.0;
  double free_space_od = 0.0;

  double cavity_od() const;
};

// Collects every violated invariant; throws ConfigError listing them field by field.
void validate(const PhysicalParams& p);

EffectiveParams derive_effective(const PhysicalParams& p);

// |g|² = Γκd_c/(4N), where Γ is the full excited-state linewidth (γ₃ = 2γ in the
// notation of PhysicalParams::atomic_decay).
double coupling_from_od(double cavity_od, double linewidth, double cavity_decay,
                        long long atom_number);
double coupling_from_od(const CavityGeometry& geom, double linewidth, double cavity_decay,
                        long long atom_number);

// α = r₀·d_c·η₀/2
double alpha_from_od(double r0, double cavity_od, double eta0);

// Human readable one-line-per-flag summary.
std::vector<std::string> describe_flags(const RegimeFlags& f);

} // namespace squeeze
