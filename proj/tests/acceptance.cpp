// Acceptance run: one PASS/FAIL line per criterion, with measured values and
// runtimes underneath. Exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "squeeze/commands.hpp"
#include "squeeze/dicke.hpp"
#include "squeeze/gaussian.hpp"
#include "squeeze/meanfield.hpp"
#include "squeeze/params.hpp"

using namespace squeeze;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

class Outcome {
public:
  bool pass = true;
  std::vector<std::string> details;

  [[gnu::format(printf, 3, 4)]] void check(bool ok, const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    add(ok ? "ok   " : "FAIL ", fmt, args);
    va_end(args);
    pass = pass && ok;
  }
  [[gnu::format(printf, 2, 3)]] void note(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    add("info ", fmt, args);
    va_end(args);
  }

private:
  void add(const char* tag, const char* fmt, va_list args) {
    char buf[512];
    std::vsnprintf(buf, sizeof buf, fmt, args);
    details.push_back(std::string(tag) + buf);
  }
};

int failures = 0;

// Runs one criterion; the runtime limit (seconds, 0 for none) is part of the verdict.
void criterion(int id, const char* title, double limit, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.check(false, "exception: %s", e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit > 0) o.check(secs < limit, "runtime %.3f s < %.3g s", secs, limit);
  std::printf("criterion %d %s: %s (%.3f s)\n", id, title, o.pass ? "PASS" : "FAIL", secs);
  for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double rel_dev(double value, double reference) { return std::abs(value / reference - 1.0); }

double max_abs(const Eigen::Matrix2d& m) { return m.cwiseAbs().maxCoeff(); }

gaussian::DriftSpec oat_drift(double alpha, double eta) { return {0.0, alpha, eta, {0.0, 0.0}}; }
gaussian::DriftSpec tat_drift(double alpha, double eta) {
  return {0.5 * alpha, alpha, eta, {0.0, 0.0}};
}

// Reference configuration in SI units (rad/s, s).
PhysicalParams reference_params() {
  const double g = 2 * kPi * 1e5;
  PhysicalParams p;
  p.cavity_coupling = g;
  p.atomic_decay = 1e2 * g;
  p.cavity_decay = 1e2 * g;
  p.rabi_frequency = 1e4 * g;
  p.detuning = 1e5 * g;
  p.two_photon_detuning = 5e2 * g;
  p.atom_number = 5'000'000;
  p.interaction_time = 0.3e-6;
  return p;
}

// Reference ratios in units of g at N = 1000, with g scaled by √5000 so that the
// collective coupling g²N is unchanged.
PhysicalParams scaled_reference() {
  PhysicalParams p;
  p.cavity_coupling = std::sqrt(5000.0);
  p.rabi_frequency = 1e4;
  p.detuning = 1e5;
  p.two_photon_detuning = 500;
  p.atomic_decay = 100;
  p.cavity_decay = 100;
  p.atom_number = 1000;
  return p;
}

std::string slurp(const fs::path& file) {
  std::ifstream is(file, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

} // namespace

int main() {
  criterion(1, "optical-depth budget endpoints", 1.0, [](Outcome& o) {
    const double dc = 6000.0 / kPi;
    const auto oat = gaussian::optimize_over_eta0(dc, 0.1, Protocol::OAT);
    const auto tat = gaussian::optimize_over_eta0(dc, 0.1, Protocol::TAT);
    o.check(std::abs(oat.db - 13.4) <= 0.5, "OAT %.3f dB within 13.4 +- 0.5 (eta0 %.4f, alpha %.3f)",
            oat.db, oat.eta0, oat.alpha);
    o.check(std::abs(tat.db - 19.6) <= 0.5, "TAT %.3f dB within 19.6 +- 0.5 (eta0 %.4f, alpha %.3f)",
            tat.db, tat.eta0, tat.alpha);
  });

  criterion(2, "reference parameter estimate", 0.1, [](Outcome& o) {
    const auto e = derive_effective(reference_params());
    o.check(std::abs(e.alpha - 4.7) <= 0.3, "alpha %.4f within 4.7 +- 0.3", e.alpha);
    o.check(std::abs(e.eta0 - 0.094) <= 0.005, "eta0 %.5f within 0.094 +- 0.005", e.eta0);
    o.check(e.r0 == 0.1, "r0 = %.12g, bit-identical to 0.1", e.r0);
    const auto oat = gaussian::xi2_oat_noisy(e.alpha, e.eta0);
    const auto tat = gaussian::xi2_tat_noisy(e.alpha, e.eta0);
    o.check(oat.db > 10.0, "OAT %.3f dB > 10 dB", oat.db);
    o.check(tat.db > 10.0, "TAT %.3f dB > 10 dB", tat.db);
  });

  criterion(3, "scaling laws", 60.0, [](Outcome& o) {
    const double r0 = 0.1;
    for (double x : {50.0, 200.0, 1000.0}) {
      const auto best = gaussian::optimize_over_eta0(x / r0, r0, Protocol::OAT,
                                                     gaussian::Objective::QuadratureVariance);
      const double law = std::cbrt(3.0) / std::pow(x, 2.0 / 3.0);
      o.check(rel_dev(best.xi2, law) < 0.10, "(a) OAT r0*d_c=%g: %.5g vs %.5g (dev %.1f%%)", x,
              best.xi2, law, 100 * rel_dev(best.xi2, law));
    }
    for (double x : {200.0, 1000.0}) {
      const auto best = gaussian::optimize_over_eta0(x / r0, r0, Protocol::TAT);
      const double law = 2.0 / x;
      o.check(rel_dev(best.xi2, law) < 0.25, "(b) TAT r0*d_c=%g: %.5g vs %.5g (dev %.1f%%)", x,
              best.xi2, law, 100 * rel_dev(best.xi2, law));
    }
    std::vector<double> lx, ly;
    for (long long n : {100LL, 300LL, 1000LL, 3000LL}) {
      const dicke::DickePropagator prop(dicke::HamiltonianSpec::ideal_oat(1.0), n);
      const double t_max = 4.0 * std::pow(static_cast<double>(n), -2.0 / 3.0);
      const auto best = dicke::minimize_xi2_over_time(dicke::css_state(n), prop, t_max);
      o.note("(c) N=%lld: min xi2 %.6g at t=%.5g", n, best.result.xi2, best.time);
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(best.result.xi2));
    }
    const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4, my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    o.check(std::abs(slope + 2.0 / 3.0) <= 0.05, "(c) exact OAT log-log slope %.4f within -2/3 +- 0.05",
            slope);
  });

  criterion(4, "Gaussian vs exact Dicke at N = 1000", 30.0, [](Outcome& o) {
    const long long n = 1000;
    const double s = 0.5 * n, kappa0 = 1.0;
    const dicke::DickePropagator oat(dicke::HamiltonianSpec::ideal_oat(kappa0), n);
    const dicke::DickePropagator tat(dicke::HamiltonianSpec::ideal_tat(kappa0, s), n);
    const auto psi = dicke::css_state(n);
    for (double alpha : {0.5, 1.0, 2.0}) {
      const double t = alpha / (2 * s * kappa0);
      const double gauss_oat = gaussian::xi2_oat_noisy(alpha, 0.0).xi2;
      const double exact_oat = dicke::wineland_xi2(oat.evolve(psi, t)).xi2;
      o.check(rel_dev(exact_oat, gauss_oat) < 0.05, "OAT alpha=%g: Dicke %.5f vs Gaussian %.5f (%.2f%%)",
              alpha, exact_oat, gauss_oat, 100 * rel_dev(exact_oat, gauss_oat));
      const double gauss_tat = gaussian::xi2_tat_noisy(alpha, 0.0).xi2;
      const double exact_tat = dicke::wineland_xi2(tat.evolve(psi, t)).xi2;
      o.check(rel_dev(exact_tat, gauss_tat) < 0.15, "TAT alpha=%g: Dicke %.5f vs Gaussian %.5f (%.2f%%)",
              alpha, exact_tat, gauss_tat, 100 * rel_dev(exact_tat, gauss_tat));
    }
  });

  criterion(5, "propagated covariance vs homogeneous solution", 0.0, [](Outcome& o) {
    const double t = 1.0;
    const Eigen::Matrix2d c0 = gaussian::GaussianSpinState::css().cov;
    double worst = 0.0;
    for (double alpha : {0.5, 2.0, 5.0})
      for (double eta : {0.0, 0.1 / t})
        for (const auto& drift : {oat_drift(alpha, eta), tat_drift(alpha, eta)}) {
          const auto h = gaussian::homogeneous_solution(drift, t);
          const auto s = gaussian::propagate(gaussian::GaussianSpinState::css(), drift,
                                             gaussian::NoiseSpec::none(), t);
          worst = std::max(worst, max_abs(s.cov - h.matrix * c0 * h.matrix.transpose()));
          if (!h.closed_form) o.check(false, "no closed form for alpha=%g eta=%g", alpha, eta);
        }
    o.check(worst < 1e-8, "max-abs covariance error %.3g < 1e-8 (OAT, TAT; eta in {0, 0.1/t})",
            worst);
  });

  criterion(6, "exact one-axis-twisting solution", 0.0, [](Outcome& o) {
    for (long long n : {20LL, 100LL, 1000LL}) {
      const double s = 0.5 * n;
      const auto psi = dicke::css_state(n);
      double worst = 0.0;
      for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 8; ++j) {
          const double mu = 0.05 * i, phi = kPi / 16 * j;
          // −φ₀Sz − κ₀Sz² for unit time gives μ = 2κ₀, φ = φ₀.
          const auto h = dicke::HamiltonianSpec::custom(0.0, -phi, -0.5 * mu);
          const double sx = dicke::moments(dicke::evolve(psi, h, 1.0)).mean[0];
          worst = std::max(worst, std::abs(sx - dicke::analytic_sx(s, mu, phi)));
        }
      o.check(worst < 1e-8 * s, "S=%g: max |<Sx> - S cos^(2S-1)(mu/2) cos(phi)| = %.3g < %.3g", s,
              worst, 1e-8 * s);
    }
  });

  criterion(7, "adiabatic elimination", 30.0, [](Outcome& o) {
    meanfield::MBConfig base;
    base.params = scaled_reference();
    const auto r = meanfield::extract_rates(base);
    o.check(std::abs(r.chi_rel) < 0.05, "(a) reference ratios: chi_eff/chi0 - 1 = %+.4f (|.| < 0.05)",
            r.chi_rel);
    o.check(std::abs(r.kappa_rel) < 0.10,
            "(b) reference ratios: kappa_eff/kappa0 - 1 = %+.4f (|.| < 0.10)", r.kappa_rel);
    o.note("at these ratios chi0/delta = %.2f: the cavity sees the Raman field detuned by "
           "delta - chi0",
           r.chi0 / base.params.two_photon_detuning);

    auto weak = base;
    weak.params.rabi_frequency = base.params.detuning / 50;
    const auto rw = meanfield::extract_rates(weak);
    o.note("drive lowered to Delta/50: chi rel %+.4f, kappa rel %+.4f", rw.chi_rel, rw.kappa_rel);

    const auto& p = weak.params;
    const auto good = meanfield::adiabatic_residuals(meanfield::integrate_mb(weak, 0.05, 500), p);
    const double good_max = std::max({good.res13, good.res23, good.res_eps});
    o.check(good_max < 0.05, "(c) in-regime residuals sigma13 %.3g, sigma23 %.3g, epsilon %.3g (< 0.05)",
            good.res13, good.res23, good.res_eps);
    auto detuned = weak;
    detuned.params.detuning /= 100;
    const auto bad = meanfield::adiabatic_residuals(meanfield::integrate_mb(detuned, 0.05, 500),
                                                    detuned.params);
    const double bad_max = std::max({bad.res13, bad.res23, bad.res_eps});
    o.check(bad_max > 0.2, "(d) Delta/100 residuals sigma13 %.3g, sigma23 %.3g, epsilon %.3g (max > 0.2)",
            bad.res13, bad.res23, bad.res_eps);
  });

  criterion(8, "property checks", 0.0, [](Outcome& o) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    double floor = INFINITY;
    for (int k = 0; k < 200; ++k) {
      const double alpha = 10 * u(rng), eta = 0.3 * u(rng);
      const auto drift = k % 2 ? tat_drift(alpha, eta) : oat_drift(alpha, eta);
      const auto noise = gaussian::NoiseSpec::optical_pumping(eta);
      const auto s = gaussian::propagate(gaussian::GaussianSpinState::css(), drift, noise, u(rng));
      floor = std::min(floor, std::sqrt(s.cov.determinant()));
    }
    o.check(floor >= 0.5 - 1e-9, "smallest symplectic eigenvalue %.12f >= 1/2 - 1e-9", floor);

    double spin_drift = 0.0, norm_drift = 0.0, sz_drift = 0.0;
    for (long long n : {7LL, 50LL, 201LL}) {
      const double s = 0.5 * n;
      const auto tilted = dicke::evolve(dicke::css_state(n), dicke::HamiltonianSpec::custom(1.0, 0, 0),
                                        0.4 + u(rng));
      for (int k = 0; k < 5; ++k) {
        const auto h = dicke::HamiltonianSpec::custom(u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5);
        const auto out = dicke::evolve(tilted, h, 2 * u(rng));
        spin_drift = std::max(spin_drift, std::abs(dicke::moments(out).total_spin_sq - s * (s + 1)) /
                                              (s * (s + 1)));
        norm_drift = std::max(norm_drift, std::abs(out.amplitudes().norm() - 1.0));
        const auto twisted = dicke::evolve(tilted, dicke::HamiltonianSpec::custom(0, u(rng), u(rng)),
                                           3 * u(rng));
        sz_drift = std::max(sz_drift, std::abs(dicke::moments(twisted).mean[2] -
                                               dicke::moments(tilted).mean[2]));
      }
    }
    o.check(spin_drift < 1e-9, "<S^2> relative drift %.3g < 1e-9", spin_drift);
    o.check(norm_drift < 1e-9, "norm drift %.3g < 1e-9", norm_drift);
    o.check(sz_drift < 1e-10, "<Sz> drift under one-axis twisting %.3g < 1e-10", sz_drift);

    bool argmin_ok = true;
    for (int k = 0; k < 100; ++k) {
      const double alpha = 0.1 + 8 * u(rng), eta0 = 0.3 * u(rng);
      const auto oat = gaussian::xi2_oat_noisy(alpha, eta0);
      const auto tat = gaussian::xi2_tat_noisy(alpha, eta0);
      for (double d : {-1e-3, 1e-3}) {
        argmin_ok = argmin_ok && gaussian::oat_quadrature_variance(alpha, eta0, oat.theta + d) >=
                                     gaussian::oat_quadrature_variance(alpha, eta0, oat.theta);
        argmin_ok = argmin_ok && gaussian::tat_quadrature_variance(alpha, eta0, tat.theta + d) >=
                                     gaussian::tat_quadrature_variance(alpha, eta0, tat.theta);
      }
    }
    o.check(argmin_ok, "reported angles are local minima under +-1e-3 perturbations (200 cases)");

    const fs::path root = fs::temp_directory_path() / "squeeze_acceptance";
    fs::remove_all(root);
    cli::run_figure("2b", root / "a", 1);
    cli::run_figure("2b", root / "b", 2);
    PhysicalParams p;
    p.rabi_frequency = 1;
    p.cavity_coupling = 1;
    p.detuning = 10;
    p.two_photon_detuning = 1;
    p.atom_number = 100;
    p.interaction_time = 6;
    cli::SimulateOptions opt;
    opt.engine = cli::Engine::Dicke;
    cli::run_simulate(p, opt, root / "a");
    cli::run_simulate(p, opt, root / "b");
    bool same = true;
    for (const char* f : {"figure_2b.csv", "figure_2b.svg", "timeseries.csv", "result.json"})
      same = same && slurp(root / "a" / f) == slurp(root / "b" / f);
    fs::remove_all(root);
    o.check(same, "figure and simulation outputs byte-identical across runs and job counts");
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
