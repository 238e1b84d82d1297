#pragma once

// Holstein–Primakoff description of a strongly x-polarised collective spin:
// quadratures X = Sy/√S, P = Sz/√S with linear drift and optical-pumping noise,
// plus the closed-form squeezing formulas and the optical-depth budget optimiser.
//
// Orientation: the drift shears X by −2Sκ₀·t·P, so the OAT in–out relation is
// X_out = X_in − α·P_in with α = 2Sκ₀t ≥ 0. All reported angles θ refer to this
// frame, which is also the frame of the Dicke simulation.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "squeeze/params.hpp"
#include "squeeze/squeezing.hpp"

namespace squeeze::gaussian {

struct GaussianSpinState {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = 0.5 * Eigen::Matrix2d::Identity();
  // Squared polarisation ⟨Sx⟩²/(N/2)² relative to the initial state; decays as e^{−2ηt}.
  double sx_fraction = 1.0;

  static GaussianSpinState css() { return {}; }
};

struct DriftSpec {
  double omega0 = 0.0; // Ω₀, rotation about x
  double twist = 0.0;  // 2Sκ₀
  double decay = 0.0;  // η
  Eigen::Vector2d drive = Eigen::Vector2d::Zero();

  // 𝒢 = Ω₀[[0,1],[−1,0]] − 2Sκ₀[[0,1],[0,0]] − ηI
  Eigen::Matrix2d matrix() const;

  // Drift of the given protocol with drive (−√S·φ₀, −√S·η). The cavity-decay
  // correction renormalises κ₀ → κ₀/(1+r₀²); the cross term it also produces is
  // dropped (see cavity_cross_term_warning).
  static DriftSpec from_effective(const EffectiveParams& e, Protocol p, bool renormalize = true);
};

// Non-empty when r₀ is large enough that the dropped cavity-decay cross term matters.
std::string cavity_cross_term_warning(const EffectiveParams& e);

struct NoiseSpec {
  Eigen::Matrix2d diffusion = Eigen::Matrix2d::Zero();

  static NoiseSpec none() { return {}; }
  static NoiseSpec optical_pumping(double eta) { return {eta * Eigen::Matrix2d::Identity()}; }
};

Eigen::Matrix2d drift_matrix(double omega0, double spin, double kappa0, double eta);

struct PropagateOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  long max_steps = 1'000'000;
};

GaussianSpinState propagate(const GaussianSpinState& s, const DriftSpec& drift,
                            const NoiseSpec& noise, double t, const PropagateOptions& opt = {});

// States at each of `times` (non-decreasing, starting at or after 0).
std::vector<GaussianSpinState> propagate_series(const GaussianSpinState& s, const DriftSpec& drift,
                                                const NoiseSpec& noise,
                                                std::span<const double> times,
                                                const PropagateOptions& opt = {});

struct HomogeneousSolution {
  Eigen::Matrix2d matrix;
  bool closed_form; // false when the drift is neither OAT nor TAT shaped
};

// 𝒜(t) = exp(𝒢t).
HomogeneousSolution homogeneous_solution(const DriftSpec& drift, double t);

// Padé scaling-and-squaring exponential.
Eigen::Matrix2d matrix_exponential(const Eigen::Matrix2d& m);

// Squeezing of the propagated covariance: ξ² = 2·min_θ Var(X_θ)/sx_fraction.
SqueezingResult squeezing(const GaussianSpinState& s);

// Closed forms. `xi2` includes the 1/(1−η₀) polarisation loss; `var_min` holds 2(ΔX_θ)².
SqueezingResult xi2_oat_ideal(double alpha);
SqueezingResult xi2_oat_noisy(double alpha, double eta0);
SqueezingResult xi2_tat_noisy(double alpha, double eta0);
SqueezingResult xi2_noisy(Protocol p, double alpha, double eta0);

// 2·Var(X_θ) of the closed-form noisy output state, as a function of θ.
double oat_quadrature_variance(double alpha, double eta0, double theta);
double tat_quadrature_variance(double alpha, double eta0, double theta);

enum class Objective {
  Xi2,                // 2(ΔX_θ)²/(1−η₀)
  QuadratureVariance, // 2(ΔX_θ)²
};

struct BudgetOptimum {
  double eta0;
  double alpha;
  double xi2; // value of the chosen objective at the optimum
  double db;
  int evaluations;
};

// Minimises the noisy squeezing with α = r₀·d_c·η₀/2 over η₀ ∈ (0, 0.5].
BudgetOptimum optimize_over_eta0(double cavity_od, double r0, Protocol p,
                                 Objective objective = Objective::Xi2, double tol = 1e-6);

struct SweepRow {
  Protocol protocol;
  double alpha;
  double eta0;
  SqueezingResult result;
};

// Rows ordered protocol-major, then η₀, then α; evaluated on `jobs` threads.
std::vector<SweepRow> squeeze_sweep(std::span<const Protocol> protocols,
                                    std::span<const double> alphas, std::span<const double> eta0s,
                                    int jobs = 1);

struct DifferenceRow {
  double alpha;
  double eta0;
  double xi2_oat;
  double xi2_tat;
  double difference; // ξ²_OAT − ξ²_TAT
};

std::vector<DifferenceRow> difference_surface(std::span<const double> alphas,
                                              std::span<const double> eta0s, int jobs = 1);

} // namespace squeeze::gaussian
