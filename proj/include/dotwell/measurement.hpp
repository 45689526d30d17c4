// Frequent projective reservoir checks: two-outcome Kraus projectors
// ("still in the dots" vs "in the fictitious well") interleaved with free
// evolution, in non-selective and null-conditioned modes.

#pragma once

#include "dotwell/liouvillian.hpp"
#include "dotwell/model.hpp"

#include <optional>
#include <vector>

namespace dotwell {

// Projectors of the reservoir check in the (1, 2, R) basis.
// Integer-valued, complete on the truncated space: M0 + MR = I.
struct KrausPair {
  static const Matrix3c& m0() {
    static const Matrix3c m = Vector3c(1, 1, 0).asDiagonal();
    return m;
  }
  static const Matrix3c& mr() {
    static const Matrix3c m = Vector3c(0, 0, 1).asDiagonal();
    return m;
  }
};

enum class MeasureMode { NonSelective, NullConditioned };

struct MeasurementSchedule {
  double tau = 0.1;  // interval between checks, units of 1/Gamma
  int n_steps = 1;
  MeasureMode mode = MeasureMode::NonSelective;

  void validate() const {
    if (!(tau > 0.0))
      throw std::domain_error("MeasurementSchedule: tau must be > 0");
    if (n_steps < 1)
      throw std::domain_error("MeasurementSchedule: n_steps must be >= 1");
  }
};

// Outcome decomposition of one projective check. Branch states are
// normalized; a branch with zero probability is left empty.
struct MeasureBranches {
  double p0 = 0.0;
  std::optional<DensityMatrix> rho0;
  double pr = 0.0;
  std::optional<DensityMatrix> rhoR;
};

inline MeasureBranches measure_branches(const DensityMatrix& rho) {
  if (rho.trace() < 1e-14)
    throw InvalidStateError("measure_branches: state has (near) zero trace");
  MeasureBranches b;
  const Matrix3c a0 = KrausPair::m0() * rho.m * KrausPair::m0();
  const Matrix3c ar = KrausPair::mr() * rho.m * KrausPair::mr();
  b.p0 = a0.trace().real();
  b.pr = ar.trace().real();
  if (b.p0 > 0.0) b.rho0 = DensityMatrix((a0 / b.p0).eval());
  if (b.pr > 0.0) b.rhoR = DensityMatrix((ar / b.pr).eval());
  return b;
}

// Non-selective Kraus sandwich M0 x M0 + MR x MR, zeroing the dot-well
// coherences; the trace is untouched by the measurement itself.
inline DensityMatrix apply_nonselective(const DensityMatrix& rho) {
  DensityMatrix out(
      (KrausPair::m0() * rho.m * KrausPair::m0() +
       KrausPair::mr() * rho.m * KrausPair::mr())
          .eval());
  return out;
}

// One evolution-plus-measurement step: free step U on vec(rho), then the
// non-selective mixture over the two outcomes.
inline DensityMatrix step_nonselective(const DensityMatrix& rho_m,
                                       const Matrix9c& u) {
  DensityMatrix evolved(unvec(u * vec(rho_m.m)));
  evolved.symmetrize();
  return apply_nonselective(evolved);
}

// Trajectory sampled at the measurement moments t = n tau. In
// null-conditioned mode states are renormalized after each surviving check
// and null_probability[k] is the cumulative probability of having obtained
// only null results up to step k.
struct FrequentRun {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<double> null_probability;  // null-conditioned mode only
};

// Runs the iterative scheme from rho0. The free step always uses the bare
// generator (detector off): the two measurement schemes are alternatives,
// not applied simultaneously.
inline FrequentRun run_frequent(const DensityMatrix& rho0,
                                const SystemParams& sys,
                                const MeasurementSchedule& sched) {
  sched.validate();
  rho0.validate();
  const Liouvillian l(sys, DetectorParams{});
  const Matrix9c u = l.propagator(sched.tau);

  FrequentRun run;
  run.times.reserve(sched.n_steps + 1);
  run.states.reserve(sched.n_steps + 1);
  run.times.push_back(0.0);
  run.states.push_back(rho0);
  double p_null = 1.0;
  if (sched.mode == MeasureMode::NullConditioned)
    run.null_probability.push_back(p_null);

  DensityMatrix rho = rho0;
  for (int n = 1; n <= sched.n_steps; ++n) {
    if (sched.mode == MeasureMode::NonSelective) {
      rho = step_nonselective(rho, u);
    } else {
      DensityMatrix evolved(unvec(u * vec(rho.m)));
      evolved.symmetrize();
      const Matrix3c a0 =
          KrausPair::m0() * evolved.m * KrausPair::m0();
      const double p0 = a0.trace().real();
      p_null *= p0;
      if (p_null < 1e-300)
        throw NumericalFailure("run_frequent: null-branch probability underflow",
                               n * sched.tau);
      rho = DensityMatrix((a0 / p0).eval());
    }
    rho.symmetrize();
    run.times.push_back(n * sched.tau);
    run.states.push_back(rho);
    if (sched.mode == MeasureMode::NullConditioned)
      run.null_probability.push_back(p_null);
  }
  return run;
}

}  // namespace dotwell
