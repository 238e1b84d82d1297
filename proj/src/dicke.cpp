#include "squeeze/dicke.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "squeeze/errors.hpp"
#include "squeeze/golden.hpp"

namespace squeeze::dicke {

using cd = std::complex<double>;

DickeState::DickeState(long long atoms, Eigen::VectorXcd amplitudes)
    : atoms_(atoms), amps_(std::move(amplitudes)) {
  if (atoms_ < 1) throw ConfigError("DickeState: atom number must be >= 1");
  if (amps_.size() != atoms_ + 1)
    throw ConfigError("DickeState: expected " + std::to_string(atoms_ + 1) + " amplitudes, got " +
                      std::to_string(amps_.size()));
  if (std::abs(amps_.squaredNorm() - 1.0) > 1e-10)
    throw NumericalError("DickeState: amplitudes not normalised", amps_.squaredNorm() - 1.0);
}

DickeState css_state(long long atoms, long long capacity) {
  if (atoms < 1) throw ConfigError("css_state: atom number must be >= 1");
  if (atoms > capacity)
    throw CapacityError("css_state: N=" + std::to_string(atoms) +
                            " exceeds the dense Dicke capacity " + std::to_string(capacity),
                        {{"atom_number", "exceeds capacity " + std::to_string(capacity)}});
  const double n = static_cast<double>(atoms);
  const double log_norm = std::lgamma(n + 1.0) - n * std::log(2.0);
  Eigen::VectorXcd c(atoms + 1);
  for (long long k = 0; k <= atoms; ++k) {
    const double kk = static_cast<double>(k);
    c[k] = std::exp(0.5 * (log_norm - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0)));
  }
  // Remove the last few ulps of normalisation error accumulated through lgamma.
  c /= c.norm();
  return DickeState(atoms, std::move(c));
}

DickeState eigenstate(long long atoms, double m) {
  const double s = 0.5 * static_cast<double>(atoms);
  const double k = m + s;
  if (k < 0 || k > static_cast<double>(atoms) || std::abs(k - std::round(k)) > 1e-12)
    throw ConfigError("eigenstate: m out of range");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(atoms + 1);
  c[static_cast<Eigen::Index>(std::round(k))] = 1.0;
  return DickeState(atoms, std::move(c));
}

double CollectiveOperator::ladder(double spin, double m) {
  const double v = spin * (spin + 1.0) - m * (m + 1.0);
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

Eigen::VectorXcd CollectiveOperator::apply(const Eigen::VectorXcd& v) const {
  const Eigen::Index n = v.size();
  const double s = 0.5 * static_cast<double>(atoms_);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  auto m = [&](Eigen::Index k) { return static_cast<double>(k) - s; };
  switch (kind_) {
  case OperatorKind::Sz:
    for (Eigen::Index k = 0; k < n; ++k) out[k] = m(k) * v[k];
    break;
  case OperatorKind::Sz2:
    for (Eigen::Index k = 0; k < n; ++k) out[k] = m(k) * m(k) * v[k];
    break;
  case OperatorKind::Splus:
    for (Eigen::Index k = 0; k + 1 < n; ++k) out[k + 1] = ladder(s, m(k)) * v[k];
    break;
  case OperatorKind::Sminus:
    for (Eigen::Index k = 0; k + 1 < n; ++k) out[k] = ladder(s, m(k)) * v[k + 1];
    break;
  case OperatorKind::Sx:
  case OperatorKind::Sy: {
    const cd up = kind_ == OperatorKind::Sx ? cd(0.5, 0.0) : cd(0.0, -0.5);
    const cd down = kind_ == OperatorKind::Sx ? cd(0.5, 0.0) : cd(0.0, 0.5);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      const double l = ladder(s, m(k));
      out[k + 1] += up * l * v[k];
      out[k] += down * l * v[k + 1];
    }
    break;
  }
  }
  return out;
}

Eigen::MatrixXcd CollectiveOperator::dense() const {
  const Eigen::Index n = atoms_ + 1;
  Eigen::MatrixXcd mat(n, n);
  for (Eigen::Index j = 0; j < n; ++j) mat.col(j) = apply(Eigen::VectorXcd::Unit(n, j));
  return mat;
}

HamiltonianSpec HamiltonianSpec::oat(double kappa0, double chi0) {
  return {Kind::OAT, 0.0, -(chi0 + kappa0), -kappa0};
}

HamiltonianSpec HamiltonianSpec::tat(double kappa0, double chi0, double spin) {
  return {Kind::TAT, -spin * kappa0, -(chi0 + kappa0), -kappa0};
}

HamiltonianSpec HamiltonianSpec::ideal_oat(double kappa0) { return {Kind::OAT, 0.0, 0.0, -kappa0}; }

HamiltonianSpec HamiltonianSpec::ideal_tat(double kappa0, double spin) {
  return {Kind::TAT, -spin * kappa0, 0.0, -kappa0};
}

HamiltonianSpec HamiltonianSpec::custom(double cx, double cz, double czz) {
  return {Kind::Custom, cx, cz, czz};
}

DickePropagator::DickePropagator(const HamiltonianSpec& h, long long atoms, double tolerance)
    : h_(h), atoms_(atoms), diagonal_(h.cx == 0.0) {
  if (atoms < 1) throw ConfigError("DickePropagator: atom number must be >= 1");
  const Eigen::Index n = atoms + 1;
  const double s = 0.5 * static_cast<double>(atoms);
  Eigen::VectorXd diag(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double m = static_cast<double>(k) - s;
    diag[k] = h.cz * m + h.czz * m * m;
  }
  if (diagonal_) {
    energies_ = std::move(diag);
    return;
  }
  Eigen::VectorXd off(n - 1);
  for (Eigen::Index k = 0; k + 1 < n; ++k)
    off[k] = 0.5 * h.cx * CollectiveOperator::ladder(s, static_cast<double>(k) - s);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw NumericalError("DickePropagator: tridiagonal eigensolver did not converge");
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();

  // ‖HV − VΛ‖ using the tridiagonal structure of H.
  Eigen::MatrixXd hv = diag.asDiagonal() * vectors_;
  hv.topRows(n - 1) += off.asDiagonal() * vectors_.bottomRows(n - 1);
  hv.bottomRows(n - 1) += off.asDiagonal() * vectors_.topRows(n - 1);
  hv -= vectors_ * energies_.asDiagonal();
  const double scale = std::max(energies_.cwiseAbs().maxCoeff(), 1e-300);
  residual_ = hv.cwiseAbs().maxCoeff() / scale;
  if (residual_ > tolerance)
    throw NumericalError("DickePropagator: eigen-residual " + std::to_string(residual_) +
                             " exceeds tolerance",
                         residual_);
}

DickeState DickePropagator::evolve(const DickeState& s, double t) const {
  if (s.atoms() != atoms_) throw ConfigError("DickePropagator: dimension mismatch");
  if (t == 0.0) return s;
  Eigen::VectorXcd out;
  if (diagonal_) {
    out = s.amplitudes();
    for (Eigen::Index k = 0; k < out.size(); ++k) out[k] *= std::polar(1.0, -energies_[k] * t);
  } else {
    const Eigen::VectorXcd& psi = s.amplitudes();
    Eigen::VectorXcd w = vectors_.transpose() * psi.real() * cd(1.0, 0.0) +
                         vectors_.transpose() * psi.imag() * cd(0.0, 1.0);
    for (Eigen::Index k = 0; k < w.size(); ++k) w[k] *= std::polar(1.0, -energies_[k] * t);
    out = vectors_ * w.real() * cd(1.0, 0.0) + vectors_ * w.imag() * cd(0.0, 1.0);
  }
  const double drift = std::abs(out.squaredNorm() - 1.0);
  if (drift > 1e-9)
    throw NumericalError("DickePropagator: norm drift " + std::to_string(drift), drift);
  // Renormalise at the ulp level so long chains of evolutions stay within the state invariant.
  out /= out.norm();
  return DickeState(s.atoms(), std::move(out));
}

DickeState evolve(const DickeState& s, const HamiltonianSpec& h, double t) {
  if (t == 0.0) return s;
  return DickePropagator(h, s.atoms()).evolve(s, t);
}

SpinMoments moments(const DickeState& s) {
  const Eigen::VectorXcd& psi = s.amplitudes();
  const long long n = s.atoms();
  const Eigen::VectorXcd u[3] = {CollectiveOperator(OperatorKind::Sx, n).apply(psi),
                                 CollectiveOperator(OperatorKind::Sy, n).apply(psi),
                                 CollectiveOperator(OperatorKind::Sz, n).apply(psi)};
  SpinMoments mo{};
  for (int i = 0; i < 3; ++i) mo.mean[i] = psi.dot(u[i]).real();
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const double second = u[i].dot(u[j]).real();
      mo.covariance(i, j) = second - mo.mean[i] * mo.mean[j];
      mo.covariance(j, i) = mo.covariance(i, j);
    }
  mo.total_spin_sq = u[0].squaredNorm() + u[1].squaredNorm() + u[2].squaredNorm();
  return mo;
}

SqueezingResult wineland_xi2(const DickeState& s, double threshold) {
  const SpinMoments mo = moments(s);
  const double n = static_cast<double>(s.atoms());
  const double sx2 = mo.mean[0] * mo.mean[0];
  if (sx2 < threshold * n * n / 4.0)
    throw DegeneratePolarization("wineland_xi2: <Sx>^2 = " + std::to_string(sx2) +
                                     " below polarization threshold",
                                 sx2);
  const auto q = quadrature_extremes(mo.covariance(1, 1), mo.covariance(1, 2), mo.covariance(2, 2));
  SqueezingResult r;
  r.var_min = q.var_min;
  r.var_max = q.var_max;
  r.theta = q.theta;
  r.isotropic = q.isotropic;
  r.xi2 = n * q.var_min / sx2;
  r.db = to_db(r.xi2);
  r.protocol = "dicke";
  return r;
}

double analytic_sx(double spin, double mu, double phi) {
  return spin * std::pow(std::cos(0.5 * mu), 2.0 * spin - 1.0) * std::cos(phi);
}

TimeOptimum minimize_xi2_over_time(const DickeState& initial, const DickePropagator& prop,
                                   double t_max, int scan_points) {
  auto objective = [&](double t) {
    try {
      return wineland_xi2(prop.evolve(initial, t)).xi2;
    } catch (const DegeneratePolarization&) {
      return std::numeric_limits<double>::max();
    }
  };
  const double xtol = 1e-9 * t_max;
  const auto best = golden_minimize(objective, 0.0, t_max, xtol, scan_points);
  return {best.x, wineland_xi2(prop.evolve(initial, best.x))};
}

} // namespace squeeze::dicke
