#include "dotwell/model.hpp"

#include <doctest.h>

#include <random>

using namespace dotwell;

namespace {

// Random valid (Hermitian, PSD, trace <= 1) density matrix.
DensityMatrix random_rho(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix3c a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = Complex(u(rng), u(rng));
  Matrix3c m = a * a.adjoint();
  m /= m.trace().real() * 1.25;
  return DensityMatrix(m);
}

}  // namespace

TEST_CASE("SystemParams derived couplings") {
  SystemParams sys;
  sys.Gamma1 = 2.0;
  sys.Gamma2 = 0.5;
  sys.Lambda = 5.0;
  CHECK(sys.omega_bar1() * sys.omega_bar1() == doctest::Approx(sys.Gamma1 * sys.Lambda / 2).epsilon(1e-15));
  CHECK(sys.omega_bar2() * sys.omega_bar2() == doctest::Approx(sys.Gamma2 * sys.Lambda / 2).epsilon(1e-15));
  sys.Lambda = 0.0;
  CHECK_THROWS_AS(sys.validate(), std::domain_error);
}

TEST_CASE("DetectorParams asymmetric construction") {
  auto det = DetectorParams::from_average(4.0, 0.0);
  CHECK(det.GammaD1 == det.GammaD2);
  CHECK(det.GammaD1 == 4.0);

  // sqrt(Gd1) - sqrt(Gd2) = delta sqrt(Gamma) to first order in delta
  for (double delta : {0.05, 0.1, 0.2}) {
    det = DetectorParams::from_average(4.0, delta);
    const double diff = std::sqrt(det.GammaD1) - std::sqrt(det.GammaD2);
    CHECK(diff == doctest::Approx(delta).epsilon(0.02));
  }
  CHECK(DetectorParams{}.off());
  CHECK_THROWS(DetectorParams::from_average(-1.0, 0.0));
}

TEST_CASE("pure_state basics") {
  auto rho = pure_state(Vector3c(1, 0, 0));
  CHECK(rho.m(0, 0).real() == 1.0);
  CHECK(rho.m.cwiseAbs().sum() == 1.0);

  auto dark = pure_state(Vector3c(1, -1, 0) / std::sqrt(2.0));
  CHECK(dark.m(0, 0).real() == doctest::Approx(0.5));
  CHECK(dark.m(1, 1).real() == doctest::Approx(0.5));
  CHECK(dark.m(0, 1).real() == doctest::Approx(-0.5));

  CHECK_THROWS_AS(pure_state(Vector3c(2, 0, 0)), InvalidStateError);
  CHECK_THROWS_AS(pure_state(Vector3c(0, 0, 0)), InvalidStateError);
}

TEST_CASE("pure states have rank 1") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vector3c v(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)),
               Complex(u(rng), u(rng)));
    v /= v.norm() * 1.0001;
    auto rho = pure_state(v);
    Eigen::SelfAdjointEigenSolver<Matrix3c> es(rho.m, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(1) < 1e-10);  // second-largest eigenvalue
  }
}

TEST_CASE("dark_bright_transform") {
  auto rho = dark_bright_transform(pure_state(Vector3c(1, 0, 0)));
  CHECK(rho.m(0, 0).real() == doctest::Approx(0.5));
  CHECK(rho.m(1, 1).real() == doctest::Approx(0.5));
  CHECK(rho.m(0, 1).real() == doctest::Approx(-0.5));

  auto dark = dark_bright_transform(pure_state(Vector3c(1, -1, 0) / std::sqrt(2.0)));
  CHECK(dark.m(0, 0).real() == doctest::Approx(1.0));

  // unitary: trace preserved; involution: applying twice recovers the input
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto r0 = random_rho(rng);
    auto r1 = dark_bright_transform(r0);
    CHECK(r1.trace() == doctest::Approx(r0.trace()).epsilon(1e-12));
    auto r2 = dark_bright_transform(r1);
    CHECK((r2.m - r0.m).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("occupations") {
  auto occ = occupations(pure_state(Vector3c(1, 0, 0)));
  CHECK(occ.P1 == 1.0);
  CHECK(occ.P2 == 0.0);
  CHECK(occ.PR == 0.0);
  CHECK(occ.Pleaked == 0.0);

  Matrix3c m = Matrix3c::Zero();
  m(2, 2) = 0.5;
  occ = occupations(DensityMatrix(m));
  CHECK(occ.PR == 0.5);
  CHECK(occ.Pleaked == 0.5);

  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    occ = occupations(random_rho(rng));
    CHECK(occ.P1 + occ.P2 + occ.PR + occ.Pleaked == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("DensityMatrix validation") {
  Matrix3c m = Matrix3c::Zero();
  m(0, 1) = Complex(0.0, 1.0);  // not Hermitian
  CHECK_THROWS_AS(DensityMatrix(m).validate(), InvalidStateError);
  m.setZero();
  m(0, 0) = 1.5;  // trace > 1
  CHECK_THROWS_AS(DensityMatrix(m).validate(), InvalidStateError);
}
