#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"

#include "epilab/dist.hpp"
#include "epilab/numerics.hpp"

using epilab::dist::Distribution1D;
using namespace epilab::numerics;

namespace {

double gaussian_h(double variance) {
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * variance);
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("adaptive simpson hits closed-form integrals") {
  const auto pi_q = integrate_1d([](double x) { return 4.0 / (1.0 + x * x); }, 0.0, 1.0, 1e-12);
  CHECK(pi_q.converged);
  CHECK(std::fabs(pi_q.value - std::numbers::pi) <= 1e-12);
  const auto g = integrate_1d([](double x) { return std::exp(-x * x); }, -10.0, 10.0, 1e-12);
  CHECK(std::fabs(g.value - std::sqrt(std::numbers::pi)) <= 1e-11);
  CHECK(g.err_estimate <= 1e-10);
}

TEST_CASE("grid density is a unit-mass lattice with zero on a node") {
  const auto f = grid_density(Distribution1D::gaussian(1.0));
  CHECK(std::fabs(trapezoid_mass(f) - 1.0) <= 1e-12);
  CHECK(std::fabs(f.mass - 1.0) <= 1e-9);  // renormalization was nearly a no-op
  // some lattice point must be exactly zero
  bool has_zero = false;
  for (std::size_t i = 0; i < f.size(); ++i) has_zero = has_zero || f.x(i) == 0.0;
  CHECK(has_zero);
  CHECK_THROWS_AS(grid_density(Distribution1D::gaussian(1.0), 12.0, 1000),
                  std::domain_error);  // not a power of two
}

TEST_CASE("grid entropy calibrates against the gaussian closed form") {
  for (double v : {0.25, 1.0, 4.0, 16.0}) {
    const auto f = grid_density(Distribution1D::gaussian(v), 14.0, std::size_t{1} << 16);
    CHECK(std::fabs(grid_entropy(f) - gaussian_h(v)) <= 1e-7);
  }
}

TEST_CASE("laplace kink costs accuracy but stays inside its band") {
  const auto f = grid_density(Distribution1D::laplace(1.0));
  const double h = grid_entropy(f);
  CHECK(std::fabs(h - (1.0 + std::numbers::ln2)) <= 2e-6);
}

TEST_CASE("scaling a density shifts its entropy by log a") {
  const auto f = grid_density(Distribution1D::gaussian(1.0), 14.0, std::size_t{1} << 16);
  const double h = grid_entropy(f);
  for (double a : {0.5, 2.0, 3.0}) {
    const auto g = scale_density(f, a);
    CHECK(std::fabs(grid_entropy(g) - h - std::log(a)) <= 1e-7);
    CHECK(std::fabs(trapezoid_mass(g) - 1.0) <= 1e-11);
  }
  // negative a reverses the axis, entropy gains log |a|
  const auto r = scale_density(f, -2.0);
  CHECK(std::fabs(grid_entropy(r) - h - std::numbers::ln2) <= 1e-7);
}

TEST_CASE("fft convolution matches the direct reference and keeps mass") {
  const auto f = grid_density(Distribution1D::gaussian(1.0), 10.0, std::size_t{1} << 12);
  const auto a = convolve(f, f);
  const auto b = convolve_reference(f, f);
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a.values[i] - b.values[i]));
  CHECK(worst <= 1e-12);
  CHECK(std::fabs(trapezoid_mass(a) - 1.0) <= 1e-9);
  CHECK(a.x0 == doctest::Approx(2.0 * f.x0).epsilon(1e-12));
  // unequal lattice spacing is rejected, not silently resampled
  const auto coarse = grid_density(Distribution1D::gaussian(1.0), 10.0, std::size_t{1} << 13);
  CHECK_THROWS_AS(convolve(f, coarse), std::domain_error);
}

TEST_CASE("convolution entropy dominates both inputs") {
  // h(X+Y) >= max(h(X), h(Y)) for independent X, Y
  const auto f = grid_density(Distribution1D::gaussian(1.0), 12.0, std::size_t{1} << 14);
  const auto s = convolve(f, f);
  CHECK(grid_entropy(s) >= grid_entropy(f) - 1e-6);
}

TEST_CASE("lp norms on the grid") {
  const auto f = grid_density(Distribution1D::gaussian(1.0), 14.0, std::size_t{1} << 16);
  // ||f||_2^2 = int f^2 = 1/(2 sqrt(pi)) for the unit gaussian
  const double l2 = lp_norm(f, 2.0);
  CHECK(std::fabs(l2 * l2 - 0.5 / std::sqrt(std::numbers::pi)) <= 1e-9);
  CHECK(std::fabs(lp_norm(f, 1.0) - 1.0) <= 1e-9);
}

TEST_CASE("tensor gauss-hermite expectation under the gaussian pair") {
  const double two = gauss_hermite_expect_2d([](double x, double y) { return x * x + y * y; },
                                             1.0, 1.0, 32);
  CHECK(std::fabs(two - 2.0) <= 1e-13);
  // E cos(X+Y) = e^{-1} for X, Y iid standard normal
  const double c = gauss_hermite_expect_2d([](double x, double y) { return std::cos(x + y); },
                                           1.0, 1.0, 64);
  CHECK(std::fabs(c - std::exp(-1.0)) <= 1e-12);
  // scale dependence: E[X^2] under sigma_x = 3
  const double nine = gauss_hermite_expect_2d([](double x, double) { return x * x; }, 3.0, 1.0, 32);
  CHECK(std::fabs(nine - 9.0) <= 1e-12);
}

}  // TEST_SUITE
