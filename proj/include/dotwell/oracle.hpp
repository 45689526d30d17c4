// Brute-force validation of the fictitious-well reduction: the two dots
// coupled to an explicitly discretized Lorentzian continuum of N modes,
// integrated as a closed (N+2)-level Schrodinger problem, compared against
// the truncated 3x3 master-equation evolution.

#pragma once

#include "dotwell/liouvillian.hpp"
#include "dotwell/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace dotwell {

// The simulation horizon ran into the Poincare recurrence of the
// discretized continuum (t_max >= 2 pi / dE).
struct RecurrenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// N reservoir modes on a uniform energy grid over [ER - W, ER + W]
// (midpoint sampling), with couplings drawn from the Lorentzian spectral
// density: Omega_jr = sqrt(dE * Gamma_j Lambda^2 / (2 pi [(E_r-ER)^2 + Lambda^2])).
struct DiscretizedReservoir {
  int n_modes = 0;
  double half_width = 0.0;  // W
  double de = 0.0;          // grid spacing 2W/N
  Eigen::VectorXd energies;
  Eigen::VectorXd coupling1;
  Eigen::VectorXd coupling2;

  double recurrence_time() const { return 2.0 * std::numbers::pi / de; }
};

inline DiscretizedReservoir build_reservoir(const SystemParams& sys, int n,
                                            double w) {
  sys.validate();
  if (n < 2) throw std::domain_error("build_reservoir: need N >= 2 modes");
  if (!(w > 0.0)) throw std::domain_error("build_reservoir: W must be > 0");
  DiscretizedReservoir res;
  res.n_modes = n;
  res.half_width = w;
  res.de = 2.0 * w / n;
  res.energies.resize(n);
  res.coupling1.resize(n);
  res.coupling2.resize(n);
  const double lam2 = sys.Lambda * sys.Lambda;
  for (int k = 0; k < n; ++k) {
    const double e = sys.ER - w + (k + 0.5) * res.de;
    const double lorentz =
        lam2 / (2.0 * std::numbers::pi * ((e - sys.ER) * (e - sys.ER) + lam2));
    res.energies(k) = e;
    res.coupling1(k) = std::sqrt(res.de * sys.Gamma1 * lorentz);
    res.coupling2(k) = std::sqrt(res.de * sys.Gamma2 * lorentz);
  }
  return res;
}

// Wavefunction of the closed (N+2)-level system.
struct AmplitudeState {
  Complex b1{0.0, 0.0};
  Complex b2{0.0, 0.0};
  Eigen::VectorXcd br;  // size N, all zero for dot-localized initial states

  double norm2() const {
    return std::norm(b1) + std::norm(b2) + br.squaredNorm();
  }
};

struct DotOccupation {
  double p1, p2;
};

namespace detail {

// H psi for the arrow-structured Hamiltonian: diagonal reservoir modes,
// each coupled to the two dots. Layout: [b1, b2, modes...].
struct ArrowHamiltonian {
  double e1, e2;
  const DiscretizedReservoir* res;

  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
    const int n = res->n_modes;
    out.resize(n + 2);
    const auto modes = in.segment(2, n).array();
    out(0) = e1 * in(0) + (res->coupling1.array().cast<Complex>() * modes).sum();
    out(1) = e2 * in(1) + (res->coupling2.array().cast<Complex>() * modes).sum();
    out.segment(2, n) = (res->energies.array().cast<Complex>() * modes +
                         res->coupling1.array().cast<Complex>() * in(0) +
                         res->coupling2.array().cast<Complex>() * in(1))
                            .matrix();
  }

  // crude spectral-radius bound for choosing Lanczos substeps
  double norm_estimate(const SystemParams& sys) const {
    const double edge = res->half_width + std::abs(sys.ER);
    const double dots = std::max(std::abs(e1), std::abs(e2));
    const double coup = std::sqrt(res->coupling1.squaredNorm() +
                                  res->coupling2.squaredNorm());
    return std::max(edge, dots) + 2.0 * coup + 1.0;
  }
};

// One exp(-i H dt) application by the Lanczos (Hermitian Krylov) method
// with full reorthogonalization. dim of the Krylov space is capped at m.
inline void lanczos_exp_step(const ArrowHamiltonian& h, Eigen::VectorXcd& psi,
                             double dt, int m = 30) {
  const double beta0 = psi.norm();
  if (beta0 == 0.0 || dt == 0.0) return;
  const int dim = static_cast<int>(psi.size());
  m = std::min(m, dim);

  Eigen::MatrixXcd v(dim, m);
  Eigen::VectorXd alpha(m), beta(m);  // beta(k) couples k and k+1
  v.col(0) = psi / beta0;
  Eigen::VectorXcd w(dim);
  int k_used = m;
  for (int k = 0; k < m; ++k) {
    h.apply(v.col(k), w);
    alpha(k) = std::real(v.col(k).dot(w));
    w -= alpha(k) * v.col(k);
    if (k > 0) w -= beta(k - 1) * v.col(k - 1);
    // full reorthogonalization against the stored basis
    for (int j = 0; j <= k; ++j) w -= v.col(j).dot(w) * v.col(j);
    const double b = w.norm();
    if (k + 1 == m || b < 1e-14) {
      k_used = k + 1;
      break;
    }
    beta(k) = b;
    v.col(k + 1) = w / b;
  }

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k_used, k_used);
  for (int k = 0; k < k_used; ++k) {
    t(k, k) = alpha(k);
    if (k + 1 < k_used) t(k, k + 1) = t(k + 1, k) = beta(k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  Eigen::VectorXcd phases(k_used);
  for (int k = 0; k < k_used; ++k)
    phases(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * dt));
  // exp(-i T dt) e1 * beta0
  Eigen::VectorXcd small =
      es.eigenvectors().cast<Complex>() *
      (phases.array() * es.eigenvectors().row(0).transpose().cast<Complex>().array())
          .matrix() *
      beta0;
  psi = v.leftCols(k_used) * small;
}

}  // namespace detail

// Unitary evolution of the discretized model, sampled on t_grid; returns
// (P1, P2) per sample. Norm drift beyond 1e-6 aborts the run.
inline std::vector<DotOccupation> schrodinger_evolve(
    const AmplitudeState& psi0, const SystemParams& sys,
    const DiscretizedReservoir& res, const std::vector<double>& t_grid) {
  if (t_grid.empty()) return {};
  if (std::abs(psi0.norm2() - 1.0) > 1e-10)
    throw InvalidStateError("schrodinger_evolve: psi0 not normalized");
  if (t_grid.back() >= res.recurrence_time())
    throw RecurrenceError(
        "schrodinger_evolve: horizon exceeds the recurrence time 2pi/dE");

  const int n = res.n_modes;
  detail::ArrowHamiltonian h{sys.E1, sys.E2, &res};
  Eigen::VectorXcd psi(n + 2);
  psi(0) = psi0.b1;
  psi(1) = psi0.b2;
  if (psi0.br.size() == 0)
    psi.segment(2, n).setZero();
  else if (psi0.br.size() == n)
    psi.segment(2, n) = psi0.br;
  else
    throw InvalidStateError("schrodinger_evolve: br size mismatch");

  const double hnorm = h.norm_estimate(sys);
  std::vector<DotOccupation> out;
  out.reserve(t_grid.size());
  double t_prev = 0.0;
  for (double t : t_grid) {
    const double span = t - t_prev;
    if (span < 0.0)
      throw std::domain_error("schrodinger_evolve: t_grid must ascend");
    if (span > 0.0) {
      // keep ||H|| dt per Lanczos step moderate
      const int nsub = std::max(1, static_cast<int>(std::ceil(span * hnorm / 10.0)));
      const double dt = span / nsub;
      for (int s = 0; s < nsub; ++s) detail::lanczos_exp_step(h, psi, dt);
    }
    t_prev = t;
    if (std::abs(psi.squaredNorm() - 1.0) > 1e-6)
      throw NumericalFailure("schrodinger_evolve: norm drift", t);
    out.push_back({std::norm(psi(0)), std::norm(psi(1))});
  }
  return out;
}

// Runs both descriptions from |1> and returns the sup deviation of P1 over
// a shared uniform grid on [0, t_max].
inline double compare_fictitious(const SystemParams& sys, int n, double w,
                                 double t_max, int n_samples = 201) {
  const DiscretizedReservoir res = build_reservoir(sys, n, w);
  std::vector<double> grid(n_samples);
  for (int k = 0; k < n_samples; ++k)
    grid[k] = t_max * static_cast<double>(k) / (n_samples - 1);

  AmplitudeState psi0;
  psi0.b1 = 1.0;
  const auto oracle = schrodinger_evolve(psi0, sys, res, grid);

  const Liouvillian l(sys, DetectorParams{});
  const auto fict = evolve(pure_state(Vector3c(1, 0, 0)), l, grid);

  double sup = 0.0;
  for (int k = 0; k < n_samples; ++k)
    sup = std::max(sup, std::abs(oracle[k].p1 - fict[k].m(0, 0).real()));
  return sup;
}

}  // namespace dotwell
