#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "epilab/dist.hpp"
#include "epilab/entropy.hpp"
#include "epilab/numerics.hpp"

using epilab::dist::Distribution1D;
using namespace epilab::entropy;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

double gaussian_h(double variance) { return 0.5 * std::log(2.0 * kPi * kE * variance); }

// grid route for cross-checking the quadrature path on mixtures
double grid_h(const Distribution1D& d) {
  const auto f = epilab::numerics::grid_density(d);
  return epilab::numerics::grid_entropy(f);
}

}  // namespace

TEST_SUITE("entropy") {

TEST_CASE("closed forms: gaussian, laplace, logistic") {
  // h(G_v) = (1/2) log(2 pi e v), h(Laplace b) = 1 + log(2b), h(Logistic s) = log s + 2
  const auto hg1 = diff_entropy(Distribution1D::gaussian(1.0));
  CHECK(hg1.method == Method::closed_form);
  CHECK(hg1.err == 0.0);
  CHECK(std::fabs(hg1.nats - 1.4189385332046727) <= 1e-15);

  const auto hg4 = diff_entropy(Distribution1D::gaussian(4.0));
  CHECK(std::fabs(hg4.nats - 2.112085713764618) <= 1e-15);
  CHECK(std::fabs(hg4.nats - gaussian_h(4.0)) <= 1e-15);

  const auto hl = diff_entropy(Distribution1D::laplace(1.0));
  CHECK(hl.method == Method::closed_form);
  CHECK(std::fabs(hl.nats - (1.0 + std::log(2.0))) <= 1e-15);

  const auto hlo = diff_entropy(Distribution1D::logistic(1.0));
  CHECK(std::fabs(hlo.nats - 2.0) <= 1e-15);
}

TEST_CASE("mixture entropy comes from quadrature and agrees with the grid") {
  const auto bi = Distribution1D::gaussian_mixture({0.6, 0.4}, {-1.0, 1.5}, {0.8, 1.2});
  const auto h = diff_entropy(bi);
  CHECK(h.method == Method::quadrature);
  CHECK(h.err <= 1e-8);
  CHECK(std::fabs(h.nats - grid_h(bi)) <= 1e-6);
  // a mixture is never sharper than the best Gaussian of the same variance
  CHECK(h.nats <= gaussian_h(bi.power()) + 1e-12);
}

TEST_CASE("entropy power inverts the gaussian entropy exactly") {
  for (double v : {0.25, 1.0, 4.0, 16.0}) {
    CHECK(std::fabs(entropy_power(Distribution1D::gaussian(v)) - v) <= 1e-13 * v);
  }
  // N(Laplace 1) = e^{2(1+log 2)} / (2 pi e) = 2e/pi
  CHECK(std::fabs(entropy_power(Distribution1D::laplace(1.0)) - 2.0 * kE / kPi) <= 1e-13);
  CHECK(std::fabs(entropy_power_from(1.4189385332046727) - 1.0) <= 1e-13);
}

TEST_CASE("renyi entropy on the grid matches the closed forms") {
  // standard Gaussian: h_p = (1/2) log(2 pi) + log(p) / (2(p-1))
  const auto g2 = renyi_entropy(Distribution1D::gaussian(1.0), 2.0);
  CHECK(std::fabs(g2.nats - 1.2655121234846454) <= 1e-8);
  CHECK(g2.err <= 1e-8);

  // Laplace b=1: h_p = log 2 - log(p) / (1 - p)
  const auto l2 = renyi_entropy(Distribution1D::laplace(1.0), 2.0);
  CHECK(std::fabs(l2.nats - std::log(4.0)) <= 1e-6);
  const auto l43 = renyi_entropy(Distribution1D::laplace(1.0), 4.0 / 3.0);
  CHECK(std::fabs(l43.nats - 1.556193397915288) <= 1e-6);

  // p < 1 needs the widened grid; the formula still holds
  const auto l23 = renyi_entropy(Distribution1D::laplace(1.0), 2.0 / 3.0);
  const double closed = std::log(2.0) - std::log(2.0 / 3.0) / (1.0 - 2.0 / 3.0);
  CHECK(std::fabs(l23.nats - closed) <= 1e-6);
}

TEST_CASE("combo entropy of two laplaces at the balanced rotation") {
  const double c = std::sqrt(0.5);
  const auto h = entropy_of_combo({c, c}, {Distribution1D::laplace(1.0), Distribution1D::laplace(1.0)});
  CHECK(std::fabs(h.nats - 1.7415470896783209) <= 5e-7);
  // the combination cannot lose entropy against either input (equal powers here)
  CHECK(h.nats >= 1.0 + std::log(2.0) - 1e-7);
}

TEST_CASE("rotated pair on gaussians reproduces every closed form") {
  const auto r = rotated_pair(Distribution1D::gaussian(1.0), Distribution1D::gaussian(4.0), 0.5);
  // U and V are Gaussians of variance 2.5 each
  CHECK(std::fabs(r.hU.nats - 1.8770838991417503) <= 1e-7);
  CHECK(std::fabs(r.hV.nats - 1.8770838991417503) <= 1e-7);
  // the rotation has unit Jacobian: h(U,V) = h(X) + h(Y) held exactly
  CHECK(r.hUV.nats == diff_entropy(Distribution1D::gaussian(1.0)).nats +
                          diff_entropy(Distribution1D::gaussian(4.0)).nats);
  // I(U;V) = (1/2) log(v_U v_V / (v_X v_Y)) = (1/2) log(6.25/4)
  CHECK(std::fabs(r.mutual_info.nats - 0.22314355131420976) <= 1e-6);
  // chain rule wiring
  CHECK(std::fabs(r.hU_given_V.nats - (r.hUV.nats - r.hV.nats)) <= 1e-12);
  CHECK(std::fabs(r.mutual_info.nats - (r.hU.nats - r.hU_given_V.nats)) <= 1e-12);
  CHECK(r.lambda == 0.5);
}

TEST_CASE("2-d joint entropy confirms the unit-jacobian identity") {
  const auto g = Distribution1D::gaussian(1.0);
  const auto g4 = Distribution1D::gaussian(4.0);
  const double direct = rotated_pair_joint_entropy_2d(g, g4, 0.3);
  CHECK(std::fabs(direct - (gaussian_h(1.0) + gaussian_h(4.0))) <= 1e-4);

  const auto l = Distribution1D::laplace(1.0);
  const double hl = 1.0 + std::log(2.0);
  // the density kink needs a finer lattice for the same accuracy
  CHECK(std::fabs(rotated_pair_joint_entropy_2d(l, l, 0.5, std::size_t{1} << 11) - 2.0 * hl) <=
        1e-4);
}

}  // TEST_SUITE
