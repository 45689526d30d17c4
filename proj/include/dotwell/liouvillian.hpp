// Linear generator of the truncated master equation and its exact
// propagation. The six coupled equations (diagonals, rho12, rho1R, rho2R
// plus Hermitian conjugates) are assembled into a 9x9 matrix L acting on
// the row-major vectorization of rho, and time steps are taken with the
// matrix exponential, exact for any step size.

#pragma once

#include "dotwell/model.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <map>
#include <mutex>
#include <vector>

namespace dotwell {

using Matrix9c = Eigen::Matrix<Complex, 9, 9>;
using Vector9c = Eigen::Matrix<Complex, 9, 1>;

// Row-major vectorization, index(i,j) = 3i + j.
inline Vector9c vec(const Matrix3c& rho) {
  Vector9c v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v(3 * i + j) = rho(i, j);
  return v;
}

inline Matrix3c unvec(const Vector9c& v) {
  Matrix3c rho;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rho(i, j) = v(3 * i + j);
  return rho;
}

// Generator of d vec(rho)/dt = L vec(rho). Immutable after construction;
// step propagators exp(L dt) are cached per step size behind a mutex.
class Liouvillian {
 public:
  Liouvillian(const SystemParams& sys, const DetectorParams& det) {
    sys.validate();
    det.validate();
    lambda_ = sys.Lambda;
    build(sys, det);
  }

  const Matrix9c& matrix() const { return L_; }
  double lambda() const { return lambda_; }

  // exp(L dt), scaling-and-squaring Pade exponential.
  Matrix9c propagator(double dt) const {
    if (dt < 0.0) throw std::domain_error("propagator: dt must be >= 0");
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(dt);
    if (it != cache_.end()) return it->second;
    Matrix9c u = (L_ * dt).exp();
    cache_.emplace(dt, u);
    return u;
  }

  Liouvillian(const Liouvillian& other) : L_(other.L_), lambda_(other.lambda_) {}

 private:
  void build(const SystemParams& sys, const DetectorParams& det) {
    const Complex im(0.0, 1.0);
    const double ob1 = sys.omega_bar1();
    const double ob2 = sys.omega_bar2();
    const double lam = sys.Lambda;
    const double g12 = det.dephasing12();
    auto idx = [](int i, int j) { return 3 * i + j; };

    L_.setZero();
    // rho11' = i Ob1 (rho1R - rhoR1)
    L_(idx(0, 0), idx(0, 2)) += im * ob1;
    L_(idx(0, 0), idx(2, 0)) -= im * ob1;
    // rho22' = i Ob2 (rho2R - rhoR2)
    L_(idx(1, 1), idx(1, 2)) += im * ob2;
    L_(idx(1, 1), idx(2, 1)) -= im * ob2;
    // rhoRR' = i Ob1 (rhoR1 - rho1R) + i Ob2 (rhoR2 - rho2R) - 2 Lam rhoRR
    L_(idx(2, 2), idx(2, 0)) += im * ob1;
    L_(idx(2, 2), idx(0, 2)) -= im * ob1;
    L_(idx(2, 2), idx(2, 1)) += im * ob2;
    L_(idx(2, 2), idx(1, 2)) -= im * ob2;
    L_(idx(2, 2), idx(2, 2)) -= 2.0 * lam;
    // rho12' = i(E2-E1) rho12 + i(Ob2 rho1R - Ob1 rhoR2) - g12 rho12
    L_(idx(0, 1), idx(0, 1)) += im * (sys.E2 - sys.E1) - g12;
    L_(idx(0, 1), idx(0, 2)) += im * ob2;
    L_(idx(0, 1), idx(2, 1)) -= im * ob1;
    // rho1R' = i(ER-E1) rho1R + i Ob1 (rho11 - rhoRR) + i Ob2 rho12
    //          - (Gd1/2 + Lam) rho1R
    L_(idx(0, 2), idx(0, 2)) += im * (sys.ER - sys.E1) - (det.GammaD1 / 2.0 + lam);
    L_(idx(0, 2), idx(0, 0)) += im * ob1;
    L_(idx(0, 2), idx(2, 2)) -= im * ob1;
    L_(idx(0, 2), idx(0, 1)) += im * ob2;
    // rho2R' = i(ER-E2) rho2R + i Ob2 (rho22 - rhoRR) + i Ob1 rho21
    //          - (Gd2/2 + Lam) rho2R
    L_(idx(1, 2), idx(1, 2)) += im * (sys.ER - sys.E2) - (det.GammaD2 / 2.0 + lam);
    L_(idx(1, 2), idx(1, 1)) += im * ob2;
    L_(idx(1, 2), idx(2, 2)) -= im * ob2;
    L_(idx(1, 2), idx(1, 0)) += im * ob1;
    // Conjugate elements evolve as the conjugate equations, elementwise:
    // d rho_ji / dt rows are the conjugated (i,j) rows with transposed
    // column indices, keeping L a plain matrix over all 9 components.
    for (auto [i, j] : {std::pair{1, 0}, {2, 0}, {2, 1}}) {
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          L_(idx(i, j), idx(l, k)) = std::conj(L_(idx(j, i), idx(k, l)));
    }
  }

  Matrix9c L_;
  double lambda_ = 0.0;
  mutable std::mutex cache_mutex_;
  mutable std::map<double, Matrix9c> cache_;
};

inline Liouvillian build_liouvillian(const SystemParams& sys,
                                     const DetectorParams& det) {
  return Liouvillian(sys, det);
}

inline Matrix9c propagator(const Liouvillian& l, double dt) {
  return l.propagator(dt);
}

// Propagates rho0 to every time in t_grid (first entry >= 0, strictly
// ascending). Each step uses the exact exponential of the increment, the
// result is symmetrized and checked against the density-matrix invariants.
inline std::vector<DensityMatrix> evolve(const DensityMatrix& rho0,
                                         const Liouvillian& l,
                                         const std::vector<double>& t_grid) {
  if (t_grid.empty()) return {};
  if (t_grid.front() < 0.0)
    throw std::domain_error("evolve: t_grid must start at >= 0");
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (t_grid[k] <= t_grid[k - 1])
      throw std::domain_error("evolve: t_grid must be strictly ascending");
  rho0.validate();

  std::vector<DensityMatrix> out;
  out.reserve(t_grid.size());
  Vector9c v = vec(rho0.m);
  double t_prev = 0.0;
  for (double t : t_grid) {
    if (t > t_prev) v = (l.propagator(t - t_prev) * v).eval();
    t_prev = t;
    DensityMatrix rho(unvec(v));
    rho.symmetrize();
    if (rho.hermiticity_error() > 1e-10 || rho.min_eigenvalue() < -1e-8 ||
        rho.trace() > 1.0 + 1e-8 || rho.trace() < -1e-10)
      throw NumericalFailure("evolve: state invariant violated", t);
    out.push_back(std::move(rho));
  }
  return out;
}

}  // namespace dotwell
