// Closed-form results for the symmetric configuration: survival probability
// P1(t) = (e^{-alpha Gamma t} + 1)^2 / 4 with the exponent alpha given by
// the scaling variable of the measurement scheme, plus the detector-rate
// relation and the tau <-> 1/Gamma_d identifications.

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dotwell {

// Regime for mapping a continuous measurement rate to an equivalent
// measurement interval. Valid for x = Lambda*tau < 2 (small) and x > 5
// (large); in between the identification is not quantitative and callers
// should look at both values.
enum class TauRegime { SmallX, LargeX };

// A point on one of the two scaling laws.
struct ScalingPoint {
  double y = 0.0;    // Lambda / Gamma_d (continuous monitoring)
  double x = 0.0;    // Lambda * tau (frequent measurements)
  double tau = 0.0;  // measurement interval, units of 1/Gamma
  TauRegime regime = TauRegime::SmallX;
};

// Exponent for continuous monitoring: alpha = 2y / (1 + 2y).
inline double alpha_continuous(double y) {
  if (y < 0.0) throw std::domain_error("alpha_continuous: y must be >= 0");
  return 2.0 * y / (1.0 + 2.0 * y);
}

// Exponent for frequent projective measurements: 1 - (1 - e^{-x}) / x,
// continued to 0 at x = 0 (series 1 - (1 - x/2 + ...)).
inline double alpha_frequent(double x) {
  if (x < 0.0) throw std::domain_error("alpha_frequent: x must be >= 0");
  if (x == 0.0) return 0.0;
  return 1.0 - (-std::expm1(-x)) / x;
}

// Survival probability in the initially occupied dot.
inline double p1_survival(double t, double gamma, double alpha) {
  if (t < 0.0) throw std::domain_error("p1_survival: t must be >= 0");
  if (!(gamma > 0.0)) throw std::domain_error("p1_survival: Gamma must be > 0");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::domain_error("p1_survival: alpha out of [0, 1]");
  const double e = std::exp(-alpha * gamma * t);
  return 0.25 * (e + 1.0) * (e + 1.0);
}

// Measurement rate of the point contact from its bias and the two
// transmission amplitudes: Gamma_d = V_d (sqrt(T) - sqrt(T'))^2 / (2 pi).
inline double detector_rate(double vd, double t, double tprime) {
  if (vd < 0.0 || t < 0.0 || tprime < 0.0)
    throw std::domain_error("detector_rate: inputs must be >= 0");
  const double s = std::sqrt(t) - std::sqrt(tprime);
  return vd * s * s / (2.0 * std::numbers::pi);
}

// Equivalent measurement interval for a given continuous rate:
// tau = 4/Gamma_d for small x, tau = 2/Gamma_d for large x.
inline double tau_from_gamma_d(double gamma_d, TauRegime regime) {
  if (!(gamma_d > 0.0))
    throw std::domain_error("tau_from_gamma_d: GammaD must be > 0");
  return (regime == TauRegime::SmallX ? 4.0 : 2.0) / gamma_d;
}

}  // namespace dotwell
