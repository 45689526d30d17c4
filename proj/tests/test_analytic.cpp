#include "dotwell/analytic.hpp"

#include <doctest.h>

#include <cmath>

using namespace dotwell;

TEST_CASE("alpha_continuous") {
  CHECK(alpha_continuous(0.0) == 0.0);
  CHECK(alpha_continuous(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(alpha_continuous(1e9) > 1.0 - 1e-8);
  CHECK_THROWS_AS(alpha_continuous(-0.1), std::domain_error);

  // strictly increasing, bounded in [0, 1)
  double prev = -1.0;
  for (double y = 0.0; y < 50.0; y += 0.25) {
    const double a = alpha_continuous(y);
    CHECK(a > prev);
    CHECK(a >= 0.0);
    CHECK(a < 1.0);
    prev = a;
  }
}

TEST_CASE("alpha_frequent") {
  CHECK(alpha_frequent(0.0) == 0.0);
  CHECK(std::abs(alpha_frequent(1e-6) - 5e-7) < 1e-12);  // leading term x/2
  CHECK(alpha_frequent(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(alpha_frequent(1e9) > 1.0 - 1e-8);
  CHECK_THROWS_AS(alpha_frequent(-1.0), std::domain_error);

  double prev = -1.0;
  for (double x = 0.0; x < 50.0; x += 0.25) {
    const double a = alpha_frequent(x);
    CHECK(a > prev);
    CHECK(a < 1.0);
    prev = a;
  }
}

TEST_CASE("limit agreement of the two exponents") {
  // identify y = x: the exponent gap vanishes in both extreme regimes
  // (alpha ~ 2y and alpha' ~ x/2 individually, so the gap is first order)
  double prev_gap = 1.0;
  for (double arg : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double gap = std::abs(alpha_continuous(arg) - alpha_frequent(arg));
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-7);
  CHECK(std::abs(alpha_continuous(1e8) - alpha_frequent(1e8)) < 1e-7);

  // with tau = 4/Gamma_d (x = 4y) the two agree to first order:
  // |alpha(y) - alpha'(4y)| / y -> 0 as y -> 0
  double prev_ratio = 1e9;
  for (double y : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const double ratio = std::abs(alpha_continuous(y) - alpha_frequent(4.0 * y)) / y;
    CHECK(ratio < prev_ratio);
    prev_ratio = ratio;
  }
  CHECK(prev_ratio < 1e-3);
}

TEST_CASE("p1_survival") {
  CHECK(p1_survival(0.0, 1.0, 0.7) == 1.0);
  CHECK(p1_survival(1e9, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  const double expected = 0.25 * std::pow(std::exp(-2.0) + 1.0, 2);
  CHECK(p1_survival(3.0, 1.0, 2.0 / 3.0) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(p1_survival(3.0, 1.0, 2.0 / 3.0) == doctest::Approx(0.32215).epsilon(1e-4));
  CHECK_THROWS_AS(p1_survival(1.0, 1.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(p1_survival(1.0, 1.0, -0.1), std::domain_error);

  // monotone decreasing in t and in alpha
  double prev = 2.0;
  for (double t = 0.0; t < 10.0; t += 0.5) {
    const double p = p1_survival(t, 1.0, 0.5);
    CHECK(p < prev);
    CHECK(p >= 0.25);
    prev = p;
  }
  CHECK(p1_survival(2.0, 1.0, 0.8) < p1_survival(2.0, 1.0, 0.4));
}

TEST_CASE("detector_rate") {
  CHECK(detector_rate(3.0, 0.4, 0.4) == 0.0);
  CHECK(detector_rate(2.0 * std::numbers::pi, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(detector_rate(2.0, 0.7, 0.2) == doctest::Approx(2.0 * detector_rate(1.0, 0.7, 0.2)).epsilon(1e-15));
  CHECK(detector_rate(1.0, 0.7, 0.2) == doctest::Approx(detector_rate(1.0, 0.2, 0.7)).epsilon(1e-15));
  CHECK_THROWS_AS(detector_rate(-1.0, 0.5, 0.5), std::domain_error);
}

TEST_CASE("tau_from_gamma_d") {
  CHECK(tau_from_gamma_d(4.0, TauRegime::SmallX) == 1.0);
  CHECK(tau_from_gamma_d(4.0, TauRegime::LargeX) == 0.5);
  CHECK_THROWS_AS(tau_from_gamma_d(0.0, TauRegime::SmallX), std::domain_error);
}
