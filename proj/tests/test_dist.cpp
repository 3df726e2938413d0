#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "epilab/dist.hpp"

using epilab::dist::Distribution1D;
using epilab::dist::Family;

TEST_SUITE("dist") {

TEST_CASE("gaussian closed forms") {
  const auto g = Distribution1D::gaussian(1.0);
  CHECK(g.family() == Family::gaussian);
  CHECK(std::fabs(g.pdf(0.0) - 0.3989422804014327) <= 1e-15);
  CHECK(g.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::fabs(g.quantile(0.5)) <= 1e-15);
  CHECK(g.power() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.sigma() == doctest::Approx(1.0).epsilon(1e-14));
  const auto g4 = Distribution1D::gaussian(4.0);
  CHECK(g4.pdf(0.0) == doctest::Approx(0.3989422804014327 / 2.0).epsilon(1e-14));
  CHECK(g4.power() == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("laplace closed forms") {
  const auto l = Distribution1D::laplace(1.0);
  CHECK(l.pdf(0.0) == 0.5);
  CHECK(l.cdf(0.0) == 0.5);
  CHECK(l.cdf(-1.0) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(l.quantile(0.25) == doctest::Approx(-std::numbers::ln2).epsilon(1e-14));
  CHECK(l.power() == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("logistic closed forms") {
  const auto lo = Distribution1D::logistic(1.0);
  CHECK(lo.pdf(0.0) == 0.25);
  CHECK(lo.cdf(0.0) == 0.5);
  CHECK(lo.quantile(0.75) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK(lo.power() == doctest::Approx(std::numbers::pi * std::numbers::pi / 3.0).epsilon(1e-13));
}

TEST_CASE("mixture density, power, and component access") {
  const auto m = Distribution1D::gaussian_mixture({0.6, 0.4}, {-1.0, 1.5}, {0.8, 1.2});
  CHECK(m.family() == Family::gaussian_mixture);
  REQUIRE(m.components().size() == 2);
  CHECK(m.components()[0].weight == 0.6);
  // E X^2 = sum w (mu^2 + s^2)
  CHECK(m.power() == doctest::Approx(0.6 * (1.0 + 0.64) + 0.4 * (2.25 + 1.44)).epsilon(1e-13));
  const auto g1 = Distribution1D::gaussian(1.0);
  const double w_pdf =
      0.6 / 0.8 * g1.pdf((0.3 + 1.0) / 0.8) + 0.4 / 1.2 * g1.pdf((0.3 - 1.5) / 1.2);
  CHECK(m.pdf(0.3) == doctest::Approx(w_pdf).epsilon(1e-14));
}

TEST_CASE("cdf and quantile are inverse across families") {
  const std::vector<Distribution1D> ds = {
      Distribution1D::gaussian(2.0), Distribution1D::laplace(0.7),
      Distribution1D::logistic(1.3),
      Distribution1D::gaussian_mixture({0.3, 0.7}, {-2.0, 1.0}, {0.5, 2.0})};
  for (const auto& d : ds)
    for (double u : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0 - 1e-6}) {
      CHECK(std::fabs(d.cdf(d.quantile(u)) - u) <= 1e-10);
      CHECK(std::fabs(d.sf(d.isf(u)) - u) <= 1e-10);
    }
}

TEST_CASE("survival functions stay meaningful deep in the tail") {
  const auto g = Distribution1D::gaussian(1.0);
  // log sf where sf itself is representable
  CHECK(g.log_sf(5.0) == doctest::Approx(std::log(g.sf(5.0))).epsilon(1e-12));
  // and far beyond double underflow of sf
  CHECK(g.log_sf(40.0) < -700.0);
  CHECK(std::isfinite(g.log_sf(40.0)));
  const auto l = Distribution1D::laplace(1.0);
  CHECK(l.log_sf(800.0) == doctest::Approx(-800.0 - std::numbers::ln2).epsilon(1e-12));
  // quantile survives extreme arguments without losing monotonicity
  CHECK(g.isf(1e-12) > g.isf(1e-6));
  CHECK(std::isfinite(g.isf(1e-12)));
}

TEST_CASE("sampling is seed-deterministic with matching moments") {
  const auto l = Distribution1D::laplace(1.0);
  const auto a = l.sample(20000, 7);
  const auto b = l.sample(20000, 7);
  REQUIRE(a.size() == 20000);
  CHECK(a == b);
  double mean = 0.0, m2 = 0.0;
  for (double x : a) {
    mean += x;
    m2 += x * x;
  }
  mean /= 20000.0;
  m2 /= 20000.0;
  CHECK(std::fabs(mean) < 0.05);       // E X = 0, sd of the mean ~ 0.01
  CHECK(std::fabs(m2 - 2.0) < 0.15);   // E X^2 = 2 b^2
}

TEST_CASE("describe strings are stable") {
  CHECK(Distribution1D::gaussian(1.0).describe() == "gaussian(variance=1.000000)");
  CHECK(Distribution1D::laplace(2.5).describe() == "laplace(b=2.500000)");
  CHECK(Distribution1D::logistic(1.0).describe() == "logistic(s=1.000000)");
  const auto m = Distribution1D::gaussian_mixture({1.0}, {0.0}, {1.0});
  CHECK(m.describe() == "mixture(w=1.000000 mu=0.000000 sigma=1.000000)");
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(Distribution1D::gaussian(0.0), std::domain_error);
  CHECK_THROWS_AS(Distribution1D::gaussian(-1.0), std::domain_error);
  CHECK_THROWS_AS(Distribution1D::laplace(0.0), std::domain_error);
  CHECK_THROWS_AS(Distribution1D::logistic(-0.5), std::domain_error);
  CHECK_THROWS_AS(Distribution1D::gaussian_mixture({}, {}, {}), std::domain_error);
  CHECK_THROWS_AS(Distribution1D::gaussian_mixture({0.5, -0.5}, {0.0, 1.0}, {1.0, 1.0}),
                  std::domain_error);  // weights must be positive
  CHECK_THROWS_AS(Distribution1D::gaussian_mixture({1.0}, {0.0}, {0.0}),
                  std::domain_error);  // sigma must be positive
  CHECK_THROWS_AS(Distribution1D::gaussian_mixture({0.5, 0.5}, {0.0}, {1.0, 1.0}),
                  std::domain_error);  // length mismatch

  // weights are normalized, locations centered on the mean
  const auto m = Distribution1D::gaussian_mixture({2.0, 2.0}, {-1.0, 1.0}, {1.0, 1.0});
  CHECK(m.components()[0].weight == 0.5);
  CHECK(m.components()[0].location == -1.0);
}

}  // TEST_SUITE
