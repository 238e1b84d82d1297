#include "squeeze/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "squeeze/errors.hpp"
#include "squeeze/golden.hpp"
#include "squeeze/ode.hpp"
#include "squeeze/parallel.hpp"

namespace squeeze::gaussian {

Eigen::Matrix2d drift_matrix(double omega0, double spin, double kappa0, double eta) {
  DriftSpec d;
  d.omega0 = omega0;
  d.twist = 2.0 * spin * kappa0;
  d.decay = eta;
  return d.matrix();
}

Eigen::Matrix2d DriftSpec::matrix() const {
  Eigen::Matrix2d g;
  g << -decay, omega0 - twist,
       -omega0, -decay;
  return g;
}

DriftSpec DriftSpec::from_effective(const EffectiveParams& e, Protocol p, bool renormalize) {
  const double kappa = renormalize ? e.kappa0 / (1.0 + e.r0 * e.r0) : e.kappa0;
  DriftSpec d;
  d.twist = 2.0 * e.spin * kappa;
  d.omega0 = p == Protocol::TAT ? e.spin * kappa : 0.0;
  d.decay = e.eta;
  const double root_s = std::sqrt(e.spin);
  d.drive = Eigen::Vector2d(-root_s * e.phi0, -root_s * e.eta);
  return d;
}

std::string cavity_cross_term_warning(const EffectiveParams& e) {
  if (e.r0 <= 0.2) return {};
  return "r0 = " + std::to_string(e.r0) +
         " > 0.2: the dropped cavity-decay cross term r0*kappa0/(1+r0^2)*(SySz+SzSy+Sy) is no "
         "longer negligible";
}

namespace {

using MomentState = std::array<double, 6>; // x, p, Σxx, Σxp, Σpp, sx_fraction

MomentState pack(const GaussianSpinState& s) {
  return {s.mean[0], s.mean[1], s.cov(0, 0), s.cov(0, 1), s.cov(1, 1), s.sx_fraction};
}

GaussianSpinState unpack(const MomentState& y) {
  GaussianSpinState s;
  s.mean = Eigen::Vector2d(y[0], y[1]);
  s.cov << y[2], y[3], y[3], y[4];
  s.sx_fraction = y[5];
  return s;
}

void check_psd(const Eigen::Matrix2d& c) {
  const double tol = 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff());
  if (c(0, 0) < -tol || c(1, 1) < -tol || c.determinant() < -tol * tol ||
      std::abs(c(0, 1) - c(1, 0)) > tol)
    throw ConfigError("propagate: initial covariance is not symmetric positive semidefinite");
}

} // namespace

std::vector<GaussianSpinState> propagate_series(const GaussianSpinState& s, const DriftSpec& drift,
                                                const NoiseSpec& noise,
                                                std::span<const double> times,
                                                const PropagateOptions& opt) {
  check_psd(s.cov);
  const Eigen::Matrix2d g = drift.matrix();
  const Eigen::Matrix2d dmat = noise.diffusion;
  const Eigen::Vector2d drive = drift.drive;
  const double eta = drift.decay;

  auto rhs = [&](const MomentState& y, MomentState& dy, double /*t*/) {
    const Eigen::Vector2d v(y[0], y[1]);
    Eigen::Matrix2d c;
    c << y[2], y[3], y[3], y[4];
    const Eigen::Vector2d dv = g * v + drive;
    const Eigen::Matrix2d gc = g * c;
    const Eigen::Matrix2d dc = gc + gc.transpose() + dmat;
    dy = {dv[0], dv[1], dc(0, 0), 0.5 * (dc(0, 1) + dc(1, 0)), dc(1, 1), -2.0 * eta * y[5]};
  };

  std::vector<double> grid;
  grid.reserve(times.size() + 1);
  grid.push_back(0.0);
  for (double t : times) {
    if (t < grid.back()) throw ConfigError("propagate: times must be non-decreasing and >= 0");
    grid.push_back(t);
  }
  std::vector<GaussianSpinState> out(times.size());
  ode::Tolerances tol{opt.abs_tol, opt.rel_tol, opt.max_steps};
  ode::integrate_sampled<6>(rhs, pack(s), grid, tol, [&](std::size_t i, const MomentState& y) {
    if (i > 0) out[i - 1] = unpack(y);
  });
  return out;
}

GaussianSpinState propagate(const GaussianSpinState& s, const DriftSpec& drift,
                            const NoiseSpec& noise, double t, const PropagateOptions& opt) {
  const double times[] = {t};
  return propagate_series(s, drift, noise, times, opt).front();
}

Eigen::Matrix2d matrix_exponential(const Eigen::Matrix2d& m) { return m.exp(); }

HomogeneousSolution homogeneous_solution(const DriftSpec& drift, double t) {
  const double damp = std::exp(-drift.decay * t);
  Eigen::Matrix2d a;
  if (drift.omega0 == 0.0) {
    a << 1.0, -drift.twist * t,
         0.0, 1.0;
    return {damp * a, true};
  }
  const double half = 0.5 * drift.twist;
  if (half != 0.0 && std::abs(drift.omega0 - half) <= 1e-12 * std::abs(half)) {
    const double x = half * t;
    a << std::cosh(x), -std::sinh(x),
         -std::sinh(x), std::cosh(x);
    return {damp * a, true};
  }
  return {matrix_exponential(drift.matrix() * t), false};
}

SqueezingResult squeezing(const GaussianSpinState& s) {
  if (!(s.sx_fraction > 0.0))
    throw DegeneratePolarization("gaussian squeezing: polarisation fraction is zero",
                                 s.sx_fraction);
  const auto q = quadrature_extremes(s.cov(0, 0), s.cov(0, 1), s.cov(1, 1));
  SqueezingResult r;
  r.var_min = 2.0 * q.var_min;
  r.var_max = 2.0 * q.var_max;
  r.theta = q.theta;
  r.isotropic = q.isotropic;
  r.xi2 = r.var_min / s.sx_fraction;
  r.db = to_db(r.xi2);
  r.protocol = "gaussian";
  return r;
}

namespace {

void check_eta0(double eta0, const char* who) {
  if (!(eta0 >= 0.0) || !(eta0 < 1.0))
    throw ConfigError(std::string(who) + ": eta0 must lie in [0, 1)", {{"eta0", "outside [0, 1)"}});
}

// Quadratic form of 2·Var(X_θ) for noisy OAT in the drift frame:
// 1 + A·cos²θ − B·sin2θ, A = α²(1−2η₀/3), B = α(1−η₀/2).
struct OatForm {
  double a, b, c;
};

OatForm oat_form(double alpha, double eta0) {
  const double A = alpha * alpha * (1.0 - 2.0 * eta0 / 3.0);
  const double B = alpha * (1.0 - 0.5 * eta0);
  return {1.0 + A, -B, 1.0};
}

// Contracting eigen-direction of the TAT generator [[0,−1],[−1,0]].
double tat_squeezed_angle() {
  Eigen::Matrix2d gen;
  gen << 0.0, -1.0,
         -1.0, 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gen);
  Eigen::Vector2d v = es.eigenvectors().col(0); // eigenvalues ascending: −1 first
  double th = std::atan2(v[1], v[0]);
  if (th < 0.0) th += std::numbers::pi;
  if (th >= std::numbers::pi) th -= std::numbers::pi;
  return th;
}

// 2·Var along the contracting (u) and expanding (w) TAT directions.
double tat_var_contracting(double alpha, double eta0) {
  const double decay = std::exp(-alpha);
  const double denom = eta0 + alpha;
  const double noise = denom > 0.0 ? eta0 * (1.0 - (1.0 - eta0) * decay) / denom : 0.0;
  return (1.0 - eta0) * decay + noise;
}

double tat_var_expanding(double alpha, double eta0) {
  const double x = alpha - eta0;
  const double ratio = x == 0.0 ? 1.0 : std::expm1(x) / x;
  return std::exp(x) + eta0 * ratio;
}

} // namespace

double oat_quadrature_variance(double alpha, double eta0, double theta) {
  const auto f = oat_form(alpha, eta0);
  return quadrature_variance(f.a, f.b, f.c, theta);
}

double tat_quadrature_variance(double alpha, double eta0, double theta) {
  const double d = theta - tat_squeezed_angle();
  const double cs = std::cos(d), sn = std::sin(d);
  return tat_var_contracting(alpha, eta0) * cs * cs + tat_var_expanding(alpha, eta0) * sn * sn;
}

SqueezingResult xi2_oat_noisy(double alpha, double eta0) {
  check_eta0(eta0, "xi2_oat_noisy");
  if (!(alpha >= 0.0)) throw ConfigError("xi2_oat_noisy: alpha must be >= 0", {{"alpha", "< 0"}});
  const auto f = oat_form(alpha, eta0);
  const auto q = quadrature_extremes(f.a, f.b, f.c);
  SqueezingResult r;
  r.var_min = q.var_min;
  r.var_max = q.var_max;
  r.theta = q.theta;
  r.isotropic = q.isotropic;
  r.xi2 = q.var_min / (1.0 - eta0);
  r.db = to_db(r.xi2);
  r.protocol = "OAT";
  if (alpha > 0.0) r.asymptote = 1.0 / (alpha * alpha) + eta0 / 3.0;
  return r;
}

SqueezingResult xi2_oat_ideal(double alpha) { return xi2_oat_noisy(alpha, 0.0); }

SqueezingResult xi2_tat_noisy(double alpha, double eta0) {
  check_eta0(eta0, "xi2_tat_noisy");
  if (!(alpha >= 0.0)) throw ConfigError("xi2_tat_noisy: alpha must be >= 0", {{"alpha", "< 0"}});
  SqueezingResult r;
  r.var_min = tat_var_contracting(alpha, eta0);
  r.var_max = tat_var_expanding(alpha, eta0);
  r.isotropic = alpha == 0.0;
  r.theta = r.isotropic ? 0.0 : tat_squeezed_angle();
  r.xi2 = r.var_min / (1.0 - eta0);
  r.db = to_db(r.xi2);
  r.protocol = "TAT";
  if (alpha > 0.0) r.asymptote = eta0 / alpha;
  return r;
}

SqueezingResult xi2_noisy(Protocol p, double alpha, double eta0) {
  return p == Protocol::OAT ? xi2_oat_noisy(alpha, eta0) : xi2_tat_noisy(alpha, eta0);
}

BudgetOptimum optimize_over_eta0(double cavity_od, double r0, Protocol p, Objective objective,
                                 double tol) {
  if (!(cavity_od > 0.0))
    throw ConfigError("optimize_over_eta0: cavity OD must be > 0", {{"d_c", "must be > 0"}});
  if (!(r0 > 0.0) || !(r0 < 1.0))
    throw ConfigError("optimize_over_eta0: r0 must lie in (0, 1)", {{"r0", "outside (0, 1)"}});
  auto value = [&](double eta0) {
    const auto r = xi2_noisy(p, alpha_from_od(r0, cavity_od, eta0), eta0);
    return objective == Objective::Xi2 ? r.xi2 : r.var_min;
  };
  const auto m = golden_minimize(value, 1e-9, 0.5, tol);
  return {m.x, alpha_from_od(r0, cavity_od, m.x), m.fx, to_db(m.fx), m.evaluations};
}

std::vector<SweepRow> squeeze_sweep(std::span<const Protocol> protocols,
                                    std::span<const double> alphas, std::span<const double> eta0s,
                                    int jobs) {
  if (protocols.empty() || alphas.empty() || eta0s.empty())
    throw ConfigError("squeeze_sweep: grids must be non-empty");
  const std::size_t na = alphas.size(), ne = eta0s.size();
  std::vector<SweepRow> rows(protocols.size() * ne * na);
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    const std::size_t ip = i / (ne * na);
    const std::size_t ie = (i / na) % ne;
    const std::size_t ia = i % na;
    const Protocol p = protocols[ip];
    rows[i] = {p, alphas[ia], eta0s[ie], xi2_noisy(p, alphas[ia], eta0s[ie])};
  });
  return rows;
}

std::vector<DifferenceRow> difference_surface(std::span<const double> alphas,
                                              std::span<const double> eta0s, int jobs) {
  if (alphas.empty() || eta0s.empty())
    throw ConfigError("difference_surface: grids must be non-empty");
  const std::size_t na = alphas.size();
  std::vector<DifferenceRow> rows(eta0s.size() * na);
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    const double a = alphas[i % na], e = eta0s[i / na];
    const double oat = xi2_oat_noisy(a, e).xi2;
    const double tat = xi2_tat_noisy(a, e).xi2;
    rows[i] = {a, e, oat, tat, oat - tat};
  });
  return rows;
}

} // namespace squeeze::gaussian
