#include "epilab/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "epilab/kernels.hpp"

namespace epilab::dist {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kSqrt2 = std::numbers::sqrt2;

double logsumexp2(double a, double b) {
  double hi = std::max(a, b);
  if (std::isinf(hi) && hi < 0) return hi;
  return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

}  // namespace

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double std_normal_logpdf(double x) { return -0.5 * x * x - 0.5 * kLog2Pi; }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double std_normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double std_normal_log_sf(double x) {
  // erfc underflows past ~26.6 sigma; switch to the asymptotic expansion there.
  if (x < 26.0) return std::log(std_normal_sf(x));
  double x2 = x * x;
  double corr = std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
  return -0.5 * x2 - std::log(x) - 0.5 * kLog2Pi + corr;
}

namespace {

// Lower-tail standard-normal quantile for u <= 0.5: rational initial guess
// refined by Newton on the tail-accurate cdf.
double std_quantile_core(double u) {
  double t = std::sqrt(-2.0 * std::log(u));
  double z = -(t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t)));
  for (int it = 0; it < 6; ++it) {
    double c = std_normal_cdf(z);
    double p = std_normal_pdf(z);
    if (p <= 0.0) break;
    double step = (c - u) / p;
    z -= step;
    if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) break;
  }
  return z;
}

}  // namespace

double std_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("std_normal_quantile: u outside (0,1)");
  return u <= 0.5 ? std_quantile_core(u) : -std_quantile_core(1.0 - u);
}

double std_normal_isf(double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("std_normal_isf: s outside (0,1)");
  return s <= 0.5 ? -std_quantile_core(s) : std_quantile_core(1.0 - s);
}

Distribution1D Distribution1D::gaussian(double variance) {
  if (!(variance > 0.0)) throw std::domain_error("gaussian: variance must be positive");
  return Distribution1D(Family::gaussian, variance);
}

Distribution1D Distribution1D::laplace(double scale) {
  if (!(scale > 0.0)) throw std::domain_error("laplace: scale must be positive");
  return Distribution1D(Family::laplace, scale);
}

Distribution1D Distribution1D::logistic(double scale) {
  if (!(scale > 0.0)) throw std::domain_error("logistic: scale must be positive");
  return Distribution1D(Family::logistic, scale);
}

Distribution1D Distribution1D::gaussian_mixture(const std::vector<double>& weights,
                                                const std::vector<double>& locations,
                                                const std::vector<double>& sigmas) {
  std::size_t k = weights.size();
  if (k == 0 || k > 8) throw std::domain_error("gaussian_mixture: 1..8 components");
  if (locations.size() != k || sigmas.size() != k)
    throw std::domain_error("gaussian_mixture: parameter lengths differ");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw std::domain_error("gaussian_mixture: weights must be positive");
    wsum += w;
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < k; ++i) mean += weights[i] / wsum * locations[i];
  Distribution1D d(Family::gaussian_mixture, 0.0);
  d.components_.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(sigmas[i] > 0.0)) throw std::domain_error("gaussian_mixture: sigmas must be positive");
    d.components_.push_back({weights[i] / wsum, locations[i] - mean, sigmas[i]});
  }
  return d;
}

double Distribution1D::logpdf(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("logpdf: x must be finite");
  switch (family_) {
    case Family::gaussian: {
      double s = std::sqrt(scale_);
      return std_normal_logpdf(x / s) - std::log(s);
    }
    case Family::laplace:
      return -std::abs(x) / scale_ - std::log(2.0 * scale_);
    case Family::logistic: {
      double a = -std::abs(x) / scale_;
      return a - 2.0 * std::log1p(std::exp(a)) - std::log(scale_);
    }
    case Family::gaussian_mixture: {
      double acc = -std::numeric_limits<double>::infinity();
      for (const auto& c : components_) {
        double term = std::log(c.weight) + std_normal_logpdf((x - c.location) / c.sigma) - std::log(c.sigma);
        acc = logsumexp2(acc, term);
      }
      return acc;
    }
  }
  throw std::logic_error("unreachable");
}

double Distribution1D::pdf(double x) const { return std::exp(logpdf(x)); }

double Distribution1D::mixture_cdf_or_sf(double x, bool upper) const {
  double acc = 0.0;
  for (const auto& c : components_) {
    double z = (x - c.location) / c.sigma;
    acc += c.weight * (upper ? std_normal_sf(z) : std_normal_cdf(z));
  }
  return acc;
}

double Distribution1D::cdf(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("cdf: x must be finite");
  switch (family_) {
    case Family::gaussian:
      return std_normal_cdf(x / std::sqrt(scale_));
    case Family::laplace:
      return x < 0.0 ? 0.5 * std::exp(x / scale_) : 1.0 - 0.5 * std::exp(-x / scale_);
    case Family::logistic: {
      if (x <= 0.0) {
        double e = std::exp(x / scale_);
        return e / (1.0 + e);
      }
      return 1.0 / (1.0 + std::exp(-x / scale_));
    }
    case Family::gaussian_mixture:
      return mixture_cdf_or_sf(x, false);
  }
  throw std::logic_error("unreachable");
}

double Distribution1D::sf(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("sf: x must be finite");
  switch (family_) {
    case Family::gaussian:
      return std_normal_sf(x / std::sqrt(scale_));
    case Family::laplace:
      return x > 0.0 ? 0.5 * std::exp(-x / scale_) : 1.0 - 0.5 * std::exp(x / scale_);
    case Family::logistic: {
      if (x >= 0.0) {
        double e = std::exp(-x / scale_);
        return e / (1.0 + e);
      }
      return 1.0 / (1.0 + std::exp(x / scale_));
    }
    case Family::gaussian_mixture:
      return mixture_cdf_or_sf(x, true);
  }
  throw std::logic_error("unreachable");
}

double Distribution1D::mixture_log_tail(double x, bool upper) const {
  double acc = -std::numeric_limits<double>::infinity();
  for (const auto& c : components_) {
    double z = (x - c.location) / c.sigma;
    double lt = upper ? std_normal_log_sf(z) : std_normal_log_sf(-z);
    acc = logsumexp2(acc, std::log(c.weight) + lt);
  }
  return acc;
}

double Distribution1D::log_sf(double x) const {
  switch (family_) {
    case Family::gaussian:
      return std_normal_log_sf(x / std::sqrt(scale_));
    case Family::laplace:
      return x > 0.0 ? -x / scale_ - std::log(2.0) : std::log(sf(x));
    case Family::logistic: {
      if (x >= 0.0) {
        double a = -x / scale_;
        return a - std::log1p(std::exp(a));
      }
      return std::log(sf(x));
    }
    case Family::gaussian_mixture:
      return mixture_log_tail(x, true);
  }
  throw std::logic_error("unreachable");
}

double Distribution1D::log_cdf(double x) const {
  switch (family_) {
    case Family::gaussian:
      return std_normal_log_sf(-x / std::sqrt(scale_));
    case Family::laplace:
      return x < 0.0 ? x / scale_ - std::log(2.0) : std::log(cdf(x));
    case Family::logistic: {
      if (x <= 0.0) {
        double a = x / scale_;
        return a - std::log1p(std::exp(a));
      }
      return std::log(cdf(x));
    }
    case Family::gaussian_mixture:
      return mixture_log_tail(x, false);
  }
  throw std::logic_error("unreachable");
}

// Solves log tail(x) = target_log for the mixture; tail is sf when upper,
// cdf otherwise. Bracket per the family's construction rule, extended
// geometrically when the target lies beyond it.
double Distribution1D::mixture_solve(double target_log, bool upper) const {
  double max_loc = 0.0, max_sigma = 0.0;
  for (const auto& c : components_) {
    max_loc = std::max(max_loc, std::abs(c.location));
    max_sigma = std::max(max_sigma, c.sigma);
  }
  double bound = max_loc + 12.0 * max_sigma;
  double lo = -bound, hi = bound;
  auto tail = [&](double x) { return mixture_log_tail(x, upper); };
  // tail is decreasing in x when upper, increasing otherwise; normalize to
  // a decreasing view
  auto dec = [&](double x) { return upper ? tail(x) : -tail(x); };
  double tgt = upper ? target_log : -target_log;
  for (int i = 0; i < 80 && dec(hi) > tgt; ++i) hi *= 2.0;
  for (int i = 0; i < 80 && dec(lo) < tgt; ++i) lo *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (dec(mid) > tgt)
      lo = mid;
    else
      hi = mid;
  }
  double x = 0.5 * (lo + hi);
  // Newton polish in log space: d(log sf)/dx = -pdf/sf, d(log cdf)/dx = pdf/cdf.
  for (int it = 0; it < 8; ++it) {
    double f = tail(x) - target_log;
    double d = (upper ? -1.0 : 1.0) * std::exp(logpdf(x) - tail(x));
    if (d == 0.0 || !std::isfinite(d)) break;
    double step = f / d;
    if (!std::isfinite(step)) break;
    double nx = x - step;
    if (nx <= lo || nx >= hi) break;
    x = nx;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
  }
  return x;
}

double Distribution1D::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile: u outside (0,1)");
  switch (family_) {
    case Family::gaussian:
      return std::sqrt(scale_) * std_normal_quantile(u);
    case Family::laplace:
      return u < 0.5 ? scale_ * std::log(2.0 * u) : -scale_ * std::log(2.0 * (1.0 - u));
    case Family::logistic:
      return scale_ * (std::log(u) - std::log1p(-u));
    case Family::gaussian_mixture:
      // lower half solved against the lower tail (accurate for tiny u), upper
      // half against the survival function
      return u <= 0.5 ? mixture_solve(std::log(u), false) : mixture_solve(std::log1p(-u), true);
  }
  throw std::logic_error("unreachable");
}

double Distribution1D::isf(double s) const {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("isf: s outside (0,1)");
  switch (family_) {
    case Family::gaussian:
      return std::sqrt(scale_) * std_normal_isf(s);
    case Family::laplace:
      return s < 0.5 ? -scale_ * std::log(2.0 * s) : scale_ * std::log(2.0 * (1.0 - s));
    case Family::logistic:
      return scale_ * (std::log1p(-s) - std::log(s));
    case Family::gaussian_mixture:
      return s <= 0.5 ? mixture_solve(std::log(s), true) : mixture_solve(std::log1p(-s), false);
  }
  throw std::logic_error("unreachable");
}

double Distribution1D::power() const {
  switch (family_) {
    case Family::gaussian:
      return scale_;
    case Family::laplace:
      return 2.0 * scale_ * scale_;
    case Family::logistic:
      return std::numbers::pi * std::numbers::pi * scale_ * scale_ / 3.0;
    case Family::gaussian_mixture: {
      double p = 0.0;
      for (const auto& c : components_) p += c.weight * (c.sigma * c.sigma + c.location * c.location);
      return p;
    }
  }
  throw std::logic_error("unreachable");
}

double Distribution1D::sigma() const { return std::sqrt(power()); }

std::vector<double> Distribution1D::sample(std::size_t n, std::uint64_t seed) const {
  if (n == 0) throw std::domain_error("sample: n must be positive");
  kernels::Rng rng(seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = quantile(rng.uniform01());
  return out;
}

std::string Distribution1D::describe() const {
  switch (family_) {
    case Family::gaussian:
      return "gaussian(variance=" + std::to_string(scale_) + ")";
    case Family::laplace:
      return "laplace(b=" + std::to_string(scale_) + ")";
    case Family::logistic:
      return "logistic(s=" + std::to_string(scale_) + ")";
    case Family::gaussian_mixture: {
      std::string s = "mixture(";
      for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i) s += ", ";
        s += "w=" + std::to_string(components_[i].weight) + " mu=" + std::to_string(components_[i].location) +
             " sigma=" + std::to_string(components_[i].sigma);
      }
      return s + ")";
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace epilab::dist
