#include "epilab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "epilab/kernels.hpp"

namespace epilab::entropy {

namespace {

double mixture_quadrature_entropy(const dist::Distribution1D& d, double& err_out) {
  double hi = 0.0, sig = 0.0;
  for (const auto& c : d.components()) {
    hi = std::max(hi, std::abs(c.location));
    sig = std::max(sig, c.sigma);
  }
  double bound = hi + 14.0 * sig;
  auto integrand = [&](double x) {
    double lp = d.logpdf(x);
    return -std::exp(lp) * lp;
  };
  auto lo_half = numerics::integrate_1d(integrand, -bound, 0.0, 1e-11);
  auto hi_half = numerics::integrate_1d(integrand, 0.0, bound, 1e-11);
  if (!lo_half.converged || !hi_half.converged)
    throw std::runtime_error("diff_entropy: mixture quadrature did not converge");
  // truncated tail of -f log f: f decays Gaussian-fast past the bracket, and
  // -log f grows only quadratically there
  double tail_mass = d.sf(bound) + d.cdf(-bound);
  double tail = tail_mass * (std::abs(d.logpdf(bound)) + std::abs(d.logpdf(-bound)) + 4.0);
  err_out = lo_half.err_estimate + hi_half.err_estimate + tail;
  return lo_half.value + hi_half.value;
}

}  // namespace

EntropyValue diff_entropy(const dist::Distribution1D& d) {
  switch (d.family()) {
    case dist::Family::gaussian:
      return {0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * d.power()),
              Method::closed_form, 0.0};
    case dist::Family::laplace:
      return {1.0 + std::log(2.0 * d.scale()), Method::closed_form, 0.0};
    case dist::Family::logistic:
      return {std::log(d.scale()) + 2.0, Method::closed_form, 0.0};
    case dist::Family::gaussian_mixture: {
      double err = 0.0;
      double h = mixture_quadrature_entropy(d, err);
      return {h, Method::quadrature, err};
    }
  }
  throw std::logic_error("unreachable");
}

double entropy_power_from(double nats) {
  return std::exp(2.0 * nats) / (2.0 * std::numbers::pi * std::numbers::e);
}

double entropy_power(const dist::Distribution1D& d) {
  return entropy_power_from(diff_entropy(d).nats);
}

EntropyValue renyi_entropy(const numerics::GridDensity& f, double p) {
  if (!(p > 0.0) || p == 1.0) throw std::domain_error("renyi_entropy: need p > 0, p != 1");
  std::size_t n = f.values.size();
  auto term = [&](std::size_t i) { return std::pow(f.values[i], p); };
  double integral = kernels::block_sum_transform(n, term);
  integral -= 0.5 * (term(0) + term(n - 1));
  integral *= f.dx;
  if (!(integral > 0.0) || !std::isfinite(integral))
    throw std::runtime_error("renyi_entropy: integral of f^p is not finite and positive");
  double direct = std::log(integral) / (1.0 - p);
  double pprime = p / (p - 1.0);
  double via_norm = -pprime * std::log(numerics::lp_norm(f, p));
  if (std::abs(direct - via_norm) > 1e-10)
    throw std::runtime_error("renyi_entropy: formula cross-check failed");
  return {direct, Method::grid, 1e-8};
}

EntropyValue renyi_entropy(const dist::Distribution1D& d, double p, std::size_t n) {
  double hw = 14.0 / std::min(1.0, p);
  hw = std::min(hw, 24.0);
  return renyi_entropy(numerics::grid_density(d, hw, n), p);
}

namespace {

// Component density a*X sampled straight onto the shared lattice; equivalent
// to grid_density followed by scale_density but with one rounding instead of
// two, so all components land on bitwise the same dx.
numerics::GridDensity scaled_component_grid(const dist::Distribution1D& d, double a, double dx,
                                            std::size_t n) {
  numerics::GridDensity g;
  g.dx = dx;
  g.x0 = -static_cast<double>(n / 2) * dx;
  g.values.resize(n);
  double inv = 1.0 / std::abs(a);
  kernels::parallel_fill(g.values, [&](std::size_t i) { return d.pdf(g.x(i) / a) * inv; });
  double raw = numerics::trapezoid_mass(g);
  if (raw < 1.0 - 1e-9)
    throw std::runtime_error("entropy_of_combo: component tail mass " + std::to_string(1.0 - raw));
  g.mass = raw;
  double s = 1.0 / raw;
  kernels::parallel_fill(g.values, [&](std::size_t i) { return g.values[i] * s; });
  return g;
}

}  // namespace

numerics::GridDensity combo_density(const std::vector<double>& coeffs,
                                    const std::vector<dist::Distribution1D>& dists, std::size_t n,
                                    double half_width_sigmas) {
  if (coeffs.size() != dists.size() || coeffs.empty())
    throw std::domain_error("combo: coefficient and distribution counts differ");
  if (n < (std::size_t{1} << 12) || (n & (n - 1)) != 0)
    throw std::domain_error("combo: n must be a power of two >= 4096");
  std::vector<std::size_t> used;
  double power = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0.0) continue;
    used.push_back(i);
    power += coeffs[i] * coeffs[i] * dists[i].power();
  }
  if (used.empty()) throw std::domain_error("combo: all coefficients are zero");
  double half = half_width_sigmas * std::sqrt(power);
  double dx = half / static_cast<double>(n / 2);
  numerics::GridDensity acc = scaled_component_grid(dists[used[0]], coeffs[used[0]], dx, n);
  for (std::size_t k = 1; k < used.size(); ++k)
    acc = numerics::convolve(acc, scaled_component_grid(dists[used[k]], coeffs[used[k]], dx, n));
  return acc;
}

EntropyValue entropy_of_combo(const std::vector<double>& coeffs,
                              const std::vector<dist::Distribution1D>& dists, std::size_t n,
                              double half_width_sigmas) {
  numerics::GridDensity g = combo_density(coeffs, dists, n, half_width_sigmas);
  return {numerics::grid_entropy(g), Method::grid, 1e-6};
}

namespace {

Method combine_methods(Method a, Method b) {
  if (a == Method::grid || b == Method::grid) return Method::grid;
  if (a == Method::quadrature || b == Method::quadrature) return Method::quadrature;
  return Method::closed_form;
}

}  // namespace

RotatedPairReport rotated_pair(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                               double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::domain_error("rotated_pair: lambda outside (0,1)");
  double sl = std::sqrt(lambda);
  double sm = std::sqrt(1.0 - lambda);
  EntropyValue hX = diff_entropy(X);
  EntropyValue hY = diff_entropy(Y);
  RotatedPairReport r;
  r.lambda = lambda;
  r.hU = entropy_of_combo({sl, sm}, {X, Y});
  r.hV = entropy_of_combo({-sm, sl}, {X, Y});
  r.hUV = {hX.nats + hY.nats, combine_methods(hX.method, hY.method), hX.err + hY.err};
  r.hU_given_V = {r.hUV.nats - r.hV.nats, Method::grid, r.hUV.err + r.hV.err};
  r.mutual_info = {r.hU.nats + r.hV.nats - r.hUV.nats, Method::grid,
                   r.hU.err + r.hV.err + r.hUV.err};
  return r;
}

double rotated_pair_joint_entropy_2d(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                                     double lambda, std::size_t n, double half_width_sigmas) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::domain_error("rotated_pair_joint_entropy_2d: lambda outside (0,1)");
  double sl = std::sqrt(lambda);
  double sm = std::sqrt(1.0 - lambda);
  double su = std::sqrt(lambda * X.power() + (1.0 - lambda) * Y.power());
  double sv = std::sqrt((1.0 - lambda) * X.power() + lambda * Y.power());
  double hu = half_width_sigmas * su, hv = half_width_sigmas * sv;
  double du = 2.0 * hu / static_cast<double>(n - 1);
  double dv = 2.0 * hv / static_cast<double>(n - 1);
  std::vector<double> rows(n, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    std::size_t i = static_cast<std::size_t>(ii);
    double u = -hu + du * static_cast<double>(i);
    double acc = 0.0, comp = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double v = -hv + dv * static_cast<double>(j);
      double lp = X.logpdf(sl * u - sm * v) + Y.logpdf(sm * u + sl * v);
      double pj = std::exp(lp);
      double t = pj < 1e-30 ? 0.0 : -pj * lp;
      if (j == 0 || j == n - 1) t *= 0.5;
      double y = t - comp;
      double s = acc + y;
      comp = (s - acc) - y;
      acc = s;
    }
    if (i == 0 || i == n - 1) acc *= 0.5;
    rows[i] = acc;
  }
  return kernels::kahan_sum(rows.data(), rows.size()) * du * dv;
}

}  // namespace epilab::entropy
