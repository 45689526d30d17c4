// Core types for the double-dot / fictitious-well model:
// physical parameters, the truncated 3x3 density matrix over the basis
// {|1>, |2>, |R>}, and the dark/bright basis rotation.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace dotwell {

using Complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;
using Vector3c = Eigen::Vector3cd;

// A state failed validation (bad norm, non-Hermitian, negative weight, ...).
struct InvalidStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Propagation produced a state violating invariants; carries the time at
// which the violation was detected.
struct NumericalFailure : std::runtime_error {
  double time;
  NumericalFailure(const std::string& msg, double t)
      : std::runtime_error(msg + " at t=" + std::to_string(t)), time(t) {}
};

// Physical configuration of the dots and the finite-band continuum.
// All energies and rates are in units of Gamma; hbar = 1.
struct SystemParams {
  double E1 = 0.0;      // upper dot level
  double E2 = 0.0;      // lower dot level
  double ER = 0.0;      // center of the Lorentzian band = fictitious-well level
  double Gamma1 = 1.0;  // dot-1 -> continuum rate
  double Gamma2 = 1.0;  // dot-2 -> continuum rate
  double Lambda = 5.0;  // continuum bandwidth

  // Fictitious-well couplings, OmegaBar_j = sqrt(Gamma_j * Lambda / 2).
  double omega_bar1() const { return std::sqrt(Gamma1 * Lambda / 2.0); }
  double omega_bar2() const { return std::sqrt(Gamma2 * Lambda / 2.0); }

  void validate() const {
    if (!(Lambda > 0.0))
      throw std::domain_error("SystemParams: Lambda must be positive");
    if (Gamma1 < 0.0 || Gamma2 < 0.0)
      throw std::domain_error("SystemParams: Gamma1, Gamma2 must be >= 0");
    for (double v : {E1, E2, ER, Gamma1, Gamma2, Lambda})
      if (!std::isfinite(v))
        throw std::domain_error("SystemParams: non-finite parameter");
  }
};

// Point-contact detector backaction, expressed as dephasing rates on the
// two dots. GammaD1 = GammaD2 = 0 means the detector is off.
struct DetectorParams {
  double GammaD1 = 0.0;
  double GammaD2 = 0.0;

  DetectorParams() = default;
  DetectorParams(double gd1, double gd2) : GammaD1(gd1), GammaD2(gd2) {
    validate();
  }

  // Asymmetric-coupling parametrization GammaD_{1,2} = GammaD (1 +- delta
  // sqrt(Gamma/GammaD)), so that sqrt(GammaD1) - sqrt(GammaD2) ~ delta
  // sqrt(Gamma) to first order in delta.
  static DetectorParams from_average(double gamma_d, double delta,
                                     double gamma = 1.0) {
    if (gamma_d < 0.0)
      throw std::domain_error("DetectorParams: GammaD must be >= 0");
    if (gamma_d == 0.0) {
      if (delta != 0.0)
        throw std::domain_error("DetectorParams: delta requires GammaD > 0");
      return {};
    }
    const double d = delta * std::sqrt(gamma / gamma_d);
    DetectorParams p;
    p.GammaD1 = gamma_d * (1.0 + d);
    p.GammaD2 = gamma_d * (1.0 - d);
    p.validate();
    return p;
  }

  bool off() const { return GammaD1 == 0.0 && GammaD2 == 0.0; }

  // Dephasing rate of the inter-dot coherence, (sqrt(Gd1)-sqrt(Gd2))^2 / 2.
  double dephasing12() const {
    const double s = std::sqrt(GammaD1) - std::sqrt(GammaD2);
    return s * s / 2.0;
  }

  void validate() const {
    if (GammaD1 < 0.0 || GammaD2 < 0.0)
      throw std::domain_error("DetectorParams: rates must be >= 0");
  }
};

// Truncated density matrix over (|1>, |2>, |R>), row/column order fixed as
// (1, 2, R) everywhere. Trace below 1 is probability already leaked into
// the wide-band reservoir.
struct DensityMatrix {
  Matrix3c m = Matrix3c::Zero();

  DensityMatrix() = default;
  explicit DensityMatrix(const Matrix3c& mat) : m(mat) {}

  double trace() const { return m.trace().real(); }

  // (rho + rho^dagger) / 2, scrubs floating-point drift.
  void symmetrize() { m = ((m + m.adjoint()) / 2.0).eval(); }

  double hermiticity_error() const {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix3c> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  void validate(double psd_tol = 1e-10) const {
    if (hermiticity_error() > 1e-12)
      throw InvalidStateError("DensityMatrix: not Hermitian");
    const double tr = trace();
    if (tr < -1e-12 || tr > 1.0 + 1e-10)
      throw InvalidStateError("DensityMatrix: trace out of [0, 1]");
    if (min_eigenvalue() < -psd_tol)
      throw InvalidStateError("DensityMatrix: not positive semidefinite");
  }
};

// Occupation readout: P1, P2, PR and the weight already leaked into the
// wide-band reservoir (1 - trace).
struct Occupations {
  double P1, P2, PR, Pleaked;
};

inline Occupations occupations(const DensityMatrix& rho) {
  const double p1 = rho.m(0, 0).real();
  const double p2 = rho.m(1, 1).real();
  const double pr = rho.m(2, 2).real();
  return {p1, p2, pr, 1.0 - (p1 + p2 + pr)};
}

// Outer product |v><v| of truncated amplitudes (b1, b2, bR).
// Norm^2 must lie in (0, 1]; trace of the result equals norm^2.
inline DensityMatrix pure_state(const Vector3c& amplitudes) {
  const double n2 = amplitudes.squaredNorm();
  if (n2 == 0.0)
    throw InvalidStateError("pure_state: zero amplitudes");
  if (n2 > 1.0 + 1e-10)
    throw InvalidStateError("pure_state: norm^2 exceeds 1");
  return DensityMatrix((amplitudes * amplitudes.adjoint()).eval());
}

namespace detail {
// Rotation to the dark/bright dot basis. Real symmetric orthogonal, so it
// is its own inverse. Sign convention: |1~> = (|1> - |2>)/sqrt2 (dark when
// levels align and couplings are symmetric), |2~> = -(|1> + |2>)/sqrt2.
inline const Matrix3c& dark_bright_matrix() {
  static const Matrix3c t = [] {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix3c t0 = Matrix3c::Zero();
    t0(0, 0) = s;
    t0(0, 1) = -s;
    t0(1, 0) = -s;
    t0(1, 1) = -s;
    t0(2, 2) = 1.0;
    return t0;
  }();
  return t;
}
}  // namespace detail

// Expresses rho in the {|1~>, |2~>, |R>} basis. Unitary, trace preserving,
// and an involution (the rotation matrix is its own inverse).
inline DensityMatrix dark_bright_transform(const DensityMatrix& rho) {
  const Matrix3c& t = detail::dark_bright_matrix();
  return DensityMatrix((t * rho.m * t.adjoint()).eval());
}

}  // namespace dotwell
