#include "dotwell/oracle.hpp"

#include <doctest.h>

#include <numbers>

using namespace dotwell;

TEST_CASE("build_reservoir samples the Lorentzian") {
  SystemParams sys;
  sys.Lambda = 5.0;

  SUBCASE("two modes at ER +- Lambda/2") {
    const auto res = build_reservoir(sys, 2, sys.Lambda);
    CHECK(res.de == doctest::Approx(sys.Lambda).epsilon(1e-15));
    CHECK(res.energies(0) == doctest::Approx(sys.ER - sys.Lambda / 2).epsilon(1e-15));
    CHECK(res.energies(1) == doctest::Approx(sys.ER + sys.Lambda / 2).epsilon(1e-15));
    for (int k = 0; k < 2; ++k) {
      const double e = res.energies(k);
      const double expected = std::sqrt(
          res.de * sys.Gamma1 * sys.Lambda * sys.Lambda /
          (2.0 * std::numbers::pi * ((e - sys.ER) * (e - sys.ER) + sys.Lambda * sys.Lambda)));
      CHECK(res.coupling1(k) == doctest::Approx(expected).epsilon(1e-14));
    }
  }

  SUBCASE("couplings squared over dE reproduce the density pointwise") {
    const auto res = build_reservoir(sys, 200, 10 * sys.Lambda);
    for (int k = 0; k < res.n_modes; k += 17) {
      const double e = res.energies(k);
      const double density =
          sys.Gamma1 * sys.Lambda * sys.Lambda /
          (2.0 * std::numbers::pi * ((e - sys.ER) * (e - sys.ER) + sys.Lambda * sys.Lambda));
      CHECK(res.coupling1(k) * res.coupling1(k) / res.de ==
            doctest::Approx(density).epsilon(1e-12));
    }
  }

  SUBCASE("sum rule approaches Gamma Lambda / 2 for wide windows") {
    const auto res = build_reservoir(sys, 20000, 50 * sys.Lambda);
    const double sum = res.coupling1.squaredNorm();
    const double target = sys.Gamma1 * sys.Lambda / 2.0;
    CHECK(sum > 0.98 * target);
    CHECK(sum <= target);
  }

  SUBCASE("wide-band limit flattens the couplings") {
    SystemParams wide;
    wide.Lambda = 1e6;
    const auto res = build_reservoir(wide, 100, 10.0);
    CHECK(res.coupling1.maxCoeff() / res.coupling1.minCoeff() ==
          doctest::Approx(1.0).epsilon(1e-8));
  }

  CHECK_THROWS_AS(build_reservoir(sys, 1, 10.0), std::domain_error);
  CHECK_THROWS_AS(build_reservoir(sys, 100, 0.0), std::domain_error);
}

TEST_CASE("schrodinger_evolve basics") {
  SystemParams sys;
  sys.Lambda = 5.0;

  SUBCASE("zero couplings: P1 constant") {
    SystemParams off;
    off.Gamma1 = off.Gamma2 = 0.0;
    off.Lambda = 5.0;
    off.E1 = 0.7;
    const auto res = build_reservoir(off, 100, 20.0);
    AmplitudeState psi0;
    psi0.b1 = 1.0;
    const auto traj = schrodinger_evolve(psi0, off, res, {0.0, 1.0, 3.0});
    for (const auto& s : traj) CHECK(s.p1 == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("norm conservation over a long run") {
    const auto res = build_reservoir(sys, 2000, 50.0);
    AmplitudeState psi0;
    psi0.b1 = std::sqrt(0.5);
    psi0.b2 = std::sqrt(0.5);
    std::vector<double> grid;
    for (int k = 0; k <= 40; ++k) grid.push_back(0.25 * k);
    CHECK_NOTHROW(schrodinger_evolve(psi0, sys, res, grid));
  }

  SUBCASE("recurrence guard") {
    const auto res = build_reservoir(sys, 10, 10.0);  // dE = 2, recurrence ~3.14
    AmplitudeState psi0;
    psi0.b1 = 1.0;
    CHECK_THROWS_AS(schrodinger_evolve(psi0, sys, res, {0.0, 5.0}), RecurrenceError);
  }

  SUBCASE("unnormalized input rejected") {
    const auto res = build_reservoir(sys, 10, 10.0);
    AmplitudeState psi0;
    psi0.b1 = 0.5;
    CHECK_THROWS_AS(schrodinger_evolve(psi0, sys, res, {0.0, 1.0}), InvalidStateError);
  }
}

TEST_CASE("Lanczos step agrees with a dense exponential on a small system") {
  SystemParams sys;
  sys.Lambda = 5.0;
  sys.E1 = 0.2;
  sys.E2 = -0.1;
  const int n = 24;
  const auto res = build_reservoir(sys, n, 20.0);

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n + 2, n + 2);
  h(0, 0) = sys.E1;
  h(1, 1) = sys.E2;
  for (int k = 0; k < n; ++k) {
    h(2 + k, 2 + k) = res.energies(k);
    h(0, 2 + k) = h(2 + k, 0) = res.coupling1(k);
    h(1, 2 + k) = h(2 + k, 1) = res.coupling2(k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const double t = 1.7;
  Eigen::VectorXcd exact = Eigen::VectorXcd::Zero(n + 2);
  exact(0) = 1.0;
  exact = es.eigenvectors() *
          (Eigen::exp(Complex(0, -t) * es.eigenvalues().array().cast<Complex>()) *
           (es.eigenvectors().adjoint() * exact).array())
              .matrix();

  AmplitudeState psi0;
  psi0.b1 = 1.0;
  const auto traj = schrodinger_evolve(psi0, sys, res, {t});
  CHECK(traj[0].p1 == doctest::Approx(std::norm(exact(0))).epsilon(1e-9));
  CHECK(traj[0].p2 == doctest::Approx(std::norm(exact(1))).epsilon(1e-9));
}

TEST_CASE("Wigner-Weisskopf: single dot decays exponentially at wide band") {
  SystemParams sys;
  sys.Gamma2 = 0.0;
  sys.Lambda = 100.0;
  const auto res = build_reservoir(sys, 12000, 50 * sys.Lambda);
  AmplitudeState psi0;
  psi0.b1 = 1.0;
  std::vector<double> grid;
  for (int k = 0; k <= 60; ++k) grid.push_back(3.0 * k / 60.0);
  const auto traj = schrodinger_evolve(psi0, sys, res, grid);
  double sup = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k)
    sup = std::max(sup, std::abs(traj[k].p1 - std::exp(-grid[k])));
  CHECK(sup <= 2e-2);
}

TEST_CASE("fictitious-well equivalence and refinement") {
  SystemParams sys;
  sys.Lambda = 5.0;

  SUBCASE("dark state is dark on both sides") {
    const auto res = build_reservoir(sys, 2000, 50.0);
    AmplitudeState psi0;
    psi0.b1 = std::sqrt(0.5);
    psi0.b2 = -std::sqrt(0.5);
    std::vector<double> grid;
    for (int k = 0; k <= 20; ++k) grid.push_back(0.25 * k);
    const auto traj = schrodinger_evolve(psi0, sys, res, grid);
    for (const auto& s : traj) CHECK(s.p1 + s.p2 == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("coarse comparison already close; refinement improves it") {
    const double d_coarse = compare_fictitious(sys, 1000, 25.0, 5.0, 101);
    const double d_fine = compare_fictitious(sys, 4000, 50.0, 5.0, 101);
    CHECK(d_fine < d_coarse);
    CHECK(d_fine < 1e-2);
  }
}
