#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "doctest.h"

#include "epilab/gaussian.hpp"

using namespace epilab::gaussian;

namespace {

Eigen::MatrixXd mat22(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("covariance construction, cholesky and log-determinant") {
  const auto id = CovMatrix::identity(3);
  CHECK(id.dim() == 3);
  CHECK(id.log_det() == 0.0);
  CHECK((id.cholesky_lower() - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);

  const CovMatrix k(mat22(2.0, 1.0, 1.0, 2.0));
  CHECK(std::fabs(k.log_det() - std::log(3.0)) <= 1e-14);
  CHECK(std::fabs(k.det() - 3.0) <= 1e-13);
  const auto& l = k.cholesky_lower();
  CHECK(std::fabs(l(0, 0) - 1.4142135623730951) <= 1e-14);
  CHECK(std::fabs(l(1, 0) - 0.70710678118654746) <= 1e-14);
  CHECK(std::fabs(l(1, 1) - 1.2247448713915889) <= 1e-14);
  CHECK(l(0, 1) == 0.0);
}

TEST_CASE("construction rejects what it cannot factor") {
  // symmetric but indefinite: eigenvalues 3 and -1
  CHECK_THROWS_AS(CovMatrix(mat22(1.0, 2.0, 2.0, 1.0)), std::domain_error);
  CHECK_THROWS_AS(CovMatrix(mat22(1.0, 0.5, 0.2, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(CovMatrix(Eigen::MatrixXd::Ones(2, 3)), std::invalid_argument);

  Eigen::MatrixXd l;
  CHECK(!cholesky_lower(mat22(1.0, 2.0, 2.0, 1.0), l));
  CHECK(cholesky_lower(mat22(2.0, 1.0, 1.0, 2.0), l));
}

TEST_CASE("gaussian entropy from the covariance") {
  CHECK(std::fabs(gaussian_entropy(CovMatrix::identity(1)) - 1.4189385332046727) <= 1e-14);
  CHECK(std::fabs(gaussian_entropy(CovMatrix(mat22(2.0, 1.0, 1.0, 2.0))) - 3.3871832107433999) <=
        1e-12);
}

TEST_CASE("rotated covariances and the scalar schur complement") {
  const auto kx = CovMatrix(Eigen::MatrixXd::Identity(1, 1));
  const auto ky = CovMatrix(4.0 * Eigen::MatrixXd::Identity(1, 1));
  const auto r = rotated_covariances(kx, ky, 0.5);
  CHECK(r.ku.m()(0, 0) == 2.5);
  CHECK(r.kv.m()(0, 0) == 2.5);
  CHECK(std::fabs(r.kuv(0, 0) - 1.5) <= 1e-15);
  // K_{U|V} = 2.5 - 1.5^2 / 2.5 = 1.6
  const auto s = schur_conditional(r.ku, r.kv, r.kuv);
  CHECK(std::fabs(s.m()(0, 0) - 1.6) <= 1e-14);
}

TEST_CASE("conditional covariance equals the harmonic matrix mean") {
  for (int n : {1, 2, 4}) {
    for (std::uint64_t s : {11u, 12u, 13u}) {
      const auto kx = random_spd(n, 2000 + s);
      const auto ky = random_spd(n, 3000 + s);
      CHECK(harmonic_identity_gap(kx, ky, 0.3) <= 1e-12);
      CHECK(harmonic_identity_gap(kx, ky, 0.5) <= 1e-12);
    }
  }
}

TEST_CASE("determinant mean chain: harmonic <= geometric <= arithmetic") {
  const auto kx = CovMatrix(Eigen::MatrixXd::Identity(1, 1));
  const auto ky = CovMatrix(4.0 * Eigen::MatrixXd::Identity(1, 1));
  const auto c = det_mean_chain(kx, ky, 0.5);
  CHECK(std::fabs(c.harmonic - 1.6) <= 1e-14);
  CHECK(std::fabs(c.geometric - 2.0) <= 1e-14);
  CHECK(std::fabs(c.arithmetic - 2.5) <= 1e-14);

  for (int n : {2, 3, 5}) {
    for (std::uint64_t s : {1u, 2u, 3u, 4u}) {
      const auto a = random_spd(n, 100 * n + s);
      const auto b = random_spd(n, 500 * n + s);
      const auto ch = det_mean_chain(a, b, 0.3);
      CHECK(ch.geometric - ch.harmonic >= -1e-12);
      CHECK(ch.arithmetic - ch.geometric >= -1e-12);
    }
  }
  // both gaps collapse when the covariances coincide
  const auto a = random_spd(3, 77);
  const auto same = det_mean_chain(a, a, 0.4);
  CHECK(std::fabs(same.arithmetic - same.geometric) <= 1e-12 * std::max(1.0, same.arithmetic));
  CHECK(std::fabs(same.geometric - same.harmonic) <= 1e-12 * std::max(1.0, same.geometric));
}

TEST_CASE("gaussian mutual information across the rotation") {
  const auto a = random_spd(3, 9001);
  CHECK(bernstein_gaussian_mi(a, a, 0.37) == 0.0);

  const auto kx = CovMatrix(Eigen::MatrixXd::Identity(1, 1));
  const auto ky = CovMatrix(4.0 * Eigen::MatrixXd::Identity(1, 1));
  // I = (1/2) log(KU KV / (KX KY)) = (1/2) log(6.25/4)
  CHECK(std::fabs(bernstein_gaussian_mi(kx, ky, 0.5) - 0.22314355131420976) <= 1e-13);
  CHECK(bernstein_gaussian_mi(kx, ky, 0.2) > 0.0);
}

TEST_CASE("seeded spd generator is reproducible and well formed") {
  const auto a = random_spd(4, 42);
  const auto b = random_spd(4, 42);
  CHECK((a.m() - b.m()).norm() == 0.0);
  const auto c = random_spd(4, 43);
  CHECK((a.m() - c.m()).norm() > 0.0);
  CHECK((a.m() - a.m().transpose()).norm() <= 1e-14 * a.m().norm());

  // inverse really inverts
  const Eigen::MatrixXd prod = a.m() * a.inverse();
  CHECK((prod - Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-12);
}

}  // TEST_SUITE
