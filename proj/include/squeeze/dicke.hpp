#pragma once

// Exact simulation of the collective spin in the symmetric (Dicke) subspace.
// Basis index k = 0..N corresponds to m = k − S.

#include <Eigen/Dense>
#include <complex>

#include "squeeze/squeezing.hpp"

namespace squeeze::dicke {

inline constexpr long long kDefaultCapacity = 10000;

class DickeState {
public:
  DickeState(long long atoms, Eigen::VectorXcd amplitudes);

  long long atoms() const { return atoms_; }
  double spin() const { return 0.5 * static_cast<double>(atoms_); }
  Eigen::Index dim() const { return amps_.size(); }
  double m(Eigen::Index k) const { return static_cast<double>(k) - spin(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  double norm() const { return amps_.norm(); }

private:
  long long atoms_;
  Eigen::VectorXcd amps_;
};

// All atoms in (|1⟩+|2⟩)/√2: binomial amplitudes, mean spin along +x.
DickeState css_state(long long atoms, long long capacity = kDefaultCapacity);
DickeState eigenstate(long long atoms, double m);

enum class OperatorKind { Sx, Sy, Sz, Sz2, Splus, Sminus };

class CollectiveOperator {
public:
  CollectiveOperator(OperatorKind kind, long long atoms) : kind_(kind), atoms_(atoms) {}

  OperatorKind kind() const { return kind_; }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  Eigen::MatrixXcd dense() const;

  // √(S(S+1) − m(m+1)), the S+ matrix element ⟨m+1|S+|m⟩.
  static double ladder(double spin, double m);

private:
  OperatorKind kind_;
  long long atoms_;
};

// H = c_x·Sx + c_z·Sz + c_zz·Sz² (angular frequencies).
struct HamiltonianSpec {
  enum class Kind { OAT, TAT, Custom };
  Kind kind = Kind::Custom;
  double cx = 0.0;
  double cz = 0.0;
  double czz = 0.0;

  // −χ₀Sz − κ₀(Sz + Sz²)
  static HamiltonianSpec oat(double kappa0, double chi0);
  // OAT plus the rotation −Ω₀Sx with Ω₀ = Sκ₀.
  static HamiltonianSpec tat(double kappa0, double chi0, double spin);
  // Displacement-free forms: twisting only (−κ₀Sz², and −Sκ₀Sx for TAT).
  static HamiltonianSpec ideal_oat(double kappa0);
  static HamiltonianSpec ideal_tat(double kappa0, double spin);
  static HamiltonianSpec custom(double cx, double cz, double czz);
};

// Unitary propagator for a fixed Hamiltonian and dimension. With c_x = 0 the
// evolution is an exact diagonal phase; otherwise the real-symmetric tridiagonal
// Hamiltonian is diagonalised once and reused for every evolution time.
class DickePropagator {
public:
  DickePropagator(const HamiltonianSpec& h, long long atoms, double tolerance = 1e-10);

  DickeState evolve(const DickeState& s, double t) const;
  bool diagonal() const { return diagonal_; }
  // Largest ‖Hv − λv‖/‖H‖ over eigenpairs (0 for the diagonal case).
  double residual() const { return residual_; }

private:
  HamiltonianSpec h_;
  long long atoms_;
  bool diagonal_;
  double residual_ = 0.0;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
};

DickeState evolve(const DickeState& s, const HamiltonianSpec& h, double t);

struct SpinMoments {
  Eigen::Vector3d mean;       // ⟨Sx⟩, ⟨Sy⟩, ⟨Sz⟩
  Eigen::Matrix3d covariance; // symmetrised, ⟨{S_i,S_j}⟩/2 − ⟨S_i⟩⟨S_j⟩
  double total_spin_sq;       // ⟨Sx² + Sy² + Sz²⟩
};

SpinMoments moments(const DickeState& s);

// Wineland parameter with the mean spin taken along x. Throws DegeneratePolarization
// when ⟨Sx⟩² < threshold·N²/4.
SqueezingResult wineland_xi2(const DickeState& s, double threshold = 1e-6);

// ⟨Sx⟩ = S·cos^{2S−1}(μ/2)·cos φ for the CSS under −φ₀Sz − κ₀Sz² (equivalently
// −χ₀Sz − κ₀(Sz + Sz²)), with μ = 2κ₀t and φ = φ₀t.
double analytic_sx(double spin, double mu, double phi);

struct TimeOptimum {
  double time;
  SqueezingResult result;
};

// Smallest ξ² reached on [0, t_max], coarse scan followed by golden-section refinement.
TimeOptimum minimize_xi2_over_time(const DickeState& initial, const DickePropagator& prop,
                                   double t_max, int scan_points = 200);

} // namespace squeeze::dicke
