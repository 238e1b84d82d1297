#include "squeeze/params.hpp"

#include <cmath>
#include <numbers>

#include "squeeze/errors.hpp"

namespace squeeze {

double CavityGeometry::cavity_od() const {
  return 2.0 * finesse / std::numbers::pi * free_space_od;
}

void validate(const PhysicalParams& p) {
  std::vector<ConfigError::Field> bad;
  auto rate = [&](const char* name, double v) {
    if (!std::isfinite(v))
      bad.push_back({name, "must be finite"});
    else if (v < 0.0)
      bad.push_back({name, "must be >= 0"});
  };
  rate("rabi_frequency", p.rabi_frequency);
  rate("cavity_coupling", p.cavity_coupling);
  rate("atomic_decay", p.atomic_decay);
  rate("cavity_decay", p.cavity_decay);
  rate("rotation_rate", p.rotation_rate);
  rate("interaction_time", p.interaction_time);
  if (!std::isfinite(p.detuning))
    bad.push_back({"detuning", "must be finite"});
  else if (!(p.detuning > 0.0))
    bad.push_back({"detuning", "must be > 0"});
  if (!std::isfinite(p.two_photon_detuning))
    bad.push_back({"two_photon_detuning", "must be finite"});
  else if (!(p.two_photon_detuning > 0.0))
    bad.push_back({"two_photon_detuning", "must be > 0"});
  if (p.atom_number < 1) bad.push_back({"atom_number", "must be >= 1"});

  if (!bad.empty()) {
    std::string msg = "invalid physical parameters:";
    for (const auto& f : bad) msg += " " + f.name + " (" + f.message + ");";
    throw ConfigError(msg, std::move(bad));
  }
}

EffectiveParams derive_effective(const PhysicalParams& p) {
  validate(p);
  const double om2 = p.rabi_frequency * p.rabi_frequency;
  const double g2 = p.cavity_coupling * p.cavity_coupling;
  const double D = p.detuning;
  const double d = p.two_photon_detuning;
  const double t = p.interaction_time;

  EffectiveParams e;
  e.spin = p.spin();
  e.kappa0 = om2 * g2 / (4.0 * d * D * D);
  e.chi0 = om2 / (4.0 * D);
  e.eta = e.chi0 * p.atomic_decay / D;
  e.eta0 = 2.0 * e.eta * t;
  e.alpha = 2.0 * e.spin * e.kappa0 * t;
  e.r0 = p.cavity_decay / (2.0 * d);
  e.phi0 = e.chi0 + e.kappa0;
  e.beta = std::sqrt(e.spin) * e.phi0 * t;

  auto& f = e.flags;
  f.weak_drive = p.rabi_frequency / D < 0.2;
  f.large_detuning = p.atomic_decay == 0.0 || D / p.atomic_decay > 1e2;
  const double collective = p.cavity_coupling * p.rabi_frequency / (2.0 * D) *
                            std::sqrt(static_cast<double>(p.atom_number));
  f.large_two_photon = d > 10.0 * collective;
  f.small_r0 = e.r0 < 0.2;
  f.small_eta0 = e.eta0 < 0.2;
  f.small_light_shift = e.chi0 / d < 0.2;
  return e;
}

double coupling_from_od(double cavity_od, double linewidth, double cavity_decay,
                        long long atom_number) {
  if (atom_number <= 0) throw ConfigError("coupling_from_od: atom_number must be positive");
  if (!(cavity_od >= 0.0) || !(linewidth >= 0.0) || !(cavity_decay >= 0.0))
    throw ConfigError("coupling_from_od: optical depth and rates must be >= 0");
  return std::sqrt(linewidth * cavity_decay * cavity_od /
                   (4.0 * static_cast<double>(atom_number)));
}

double coupling_from_od(const CavityGeometry& geom, double linewidth, double cavity_decay,
                        long long atom_number) {
  return coupling_from_od(geom.cavity_od(), linewidth, cavity_decay, atom_number);
}

double alpha_from_od(double r0, double cavity_od, double eta0) {
  return r0 * cavity_od * eta0 / 2.0;
}

std::vector<std::string> describe_flags(const RegimeFlags& f) {
  auto line = [](const char* name, bool ok, const char* cond) {
    return std::string(ok ? "ok    " : "WARN  ") + name + ": " + cond;
  };
  return {
      line("weak_drive", f.weak_drive, "Omega/Delta < 0.2"),
      line("large_detuning", f.large_detuning, "Delta/gamma > 100"),
      line("large_two_photon", f.large_two_photon, "delta > 10*g*Omega*sqrt(N)/(2*Delta)"),
      line("small_r0", f.small_r0, "r0 = kappa/(2*delta) < 0.2"),
      line("small_eta0", f.small_eta0, "eta0 = 2*eta*t < 0.2"),
      line("small_light_shift", f.small_light_shift, "chi0/delta < 0.2"),
  };
}

} // namespace squeeze
