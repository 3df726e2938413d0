#include "epilab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "epilab/entropy.hpp"
#include "epilab/kernels.hpp"
#include "epilab/numerics.hpp"

namespace epilab::transport {

namespace {

// Probe bracket for expectations against the source law. Mixtures get the
// widest component span; the mass beyond the bracket is accounted for
// separately, never ignored.
double source_bracket(const dist::Distribution1D& d) {
  if (d.family() == dist::Family::gaussian_mixture) {
    double loc = 0.0, sig = 0.0;
    for (const auto& c : d.components()) {
      loc = std::max(loc, std::fabs(c.location));
      sig = std::max(sig, c.sigma);
    }
    return loc + 10.0 * sig;
  }
  return 10.0 * d.sigma();
}

}  // namespace

Transport1D::Transport1D(dist::Distribution1D source, dist::Distribution1D target)
    : src_(std::move(source)), tgt_(std::move(target)) {}

double Transport1D::operator()(double x) const {
  // Which tail carries the probability decides the composition: below the
  // median go through cdf/quantile, above through sf/isf. Both routes agree
  // analytically; only the conditioning differs.
  const double u = src_.cdf(x);
  if (u <= 0.5) return tgt_.quantile(u);
  return tgt_.isf(src_.sf(x));
}

double Transport1D::log_deriv(double x) const { return src_.logpdf(x) - tgt_.logpdf((*this)(x)); }

double Transport1D::deriv(double x) const { return std::exp(log_deriv(x)); }

Transport1D build_transport(const dist::Distribution1D& source, const dist::Distribution1D& target) {
  Transport1D t(source, target);

  // Certify the construction on a 10^4-point probe before handing it out:
  // strict monotonicity, positive derivative, and the pushforward law
  // cdf_target(T(x)) = cdf_source(x) to within 1e-10.
  constexpr int kProbes = 10000;
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kProbes; ++i) {
    const double u = (i + 0.5) / kProbes;
    const double x = source.quantile(u);
    const double y = t(x);
    if (!(y > prev)) throw std::runtime_error("transport probe: map is not strictly increasing");
    prev = y;
    if (!(t.deriv(x) > 0.0)) throw std::runtime_error("transport probe: nonpositive derivative");
    if (std::fabs(target.cdf(y) - source.cdf(x)) > 1e-10) {
      throw std::runtime_error("transport probe: pushforward law violated");
    }
  }
  return t;
}

ExpectationResult expect_log_deriv(const Transport1D& t) {
  const double b = source_bracket(t.source());
  const auto& src = t.source();
  const auto f = [&](double x) { return src.pdf(x) * t.log_deriv(x); };
  const auto lo = numerics::integrate_1d(f, -b, 0.0, 1e-11);
  const auto hi = numerics::integrate_1d(f, 0.0, b, 1e-11);

  const double tail_mass = src.cdf(-b) + src.sf(b);
  const double edge = std::max(std::fabs(t.log_deriv(-b)), std::fabs(t.log_deriv(b)));
  const double tail_bound = tail_mass * (edge + 10.0);

  return {lo.value + hi.value, lo.err_estimate + hi.err_estimate + tail_bound};
}

ChangeOfVariableReport verify_change_of_variable(const Transport1D& t) {
  const auto e = expect_log_deriv(t);
  const auto hs = entropy::diff_entropy(t.source());
  const auto ht = entropy::diff_entropy(t.target());
  const double residual = std::fabs(ht.nats - hs.nats - e.value);
  return {residual, e.value, e.err + hs.err + ht.err};
}

namespace {

// log T' tabulated at known quadrature abscissas. The tensor expectation
// evaluates the same few hundred coordinates n^2 times; the table turns
// those into binary searches. Off-table coordinates fall back to a direct
// evaluation, so the cache can never change a value, only its cost.
class LogDerivTable {
 public:
  LogDerivTable(const Transport1D& t, const std::vector<double>& xs) : t_(&t), xs_(xs) {
    std::sort(xs_.begin(), xs_.end());
    xs_.erase(std::unique(xs_.begin(), xs_.end()), xs_.end());
    vals_.reserve(xs_.size());
    for (double x : xs_) vals_.push_back(t_->log_deriv(x));
  }

  double operator()(double x) const {
    const auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    const double tol = 1e-9 * std::max(1.0, std::fabs(x));
    if (it != xs_.end() && std::fabs(*it - x) <= tol) return vals_[it - xs_.begin()];
    if (it != xs_.begin() && std::fabs(*(it - 1) - x) <= tol) return vals_[it - 1 - xs_.begin()];
    return t_->log_deriv(x);
  }

 private:
  const Transport1D* t_;
  std::vector<double> xs_;
  std::vector<double> vals_;
};

std::vector<double> hermite_abscissas(std::size_t nodes) {
  const auto rule = kernels::gauss_hermite(static_cast<int>(nodes));
  std::vector<double> xs(rule.nodes.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = std::numbers::sqrt2 * 1.0 * rule.nodes[i];
  return xs;
}

}  // namespace

JensenReport jensen_expectation(const Transport1D& tx, const Transport1D& ty, double lambda,
                                std::size_t nodes) {
  for (const Transport1D* t : {&tx, &ty}) {
    const auto& s = t->source();
    if (s.family() != dist::Family::gaussian || std::fabs(s.power() - 1.0) > 1e-12) {
      throw std::invalid_argument("jensen expectation needs standard Gaussian sources");
    }
  }
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0,1)");
  if (nodes < 8) throw std::invalid_argument("too few quadrature nodes");

  const double log_l = std::log(lambda);
  const double log_m = std::log1p(-lambda);

  // E log(l T' + (1-l) U') at a node pair, assembled in log space: the two
  // derivatives can be hundreds of orders of magnitude apart out where the
  // Hermite abscissas sit.
  const auto tensor_mean = [&](std::size_t n, std::size_t extra) {
    std::vector<double> xs = hermite_abscissas(n);
    const std::vector<double> half = hermite_abscissas(extra);
    xs.insert(xs.end(), half.begin(), half.end());
    const LogDerivTable lt(tx, xs), lu(ty, xs);
    const auto g = [&](double x, double y) {
      const double a = log_l + lt(x);
      const double b = log_m + lu(y);
      const double hi = std::max(a, b);
      return hi + std::log1p(std::exp(std::min(a, b) - hi));
    };
    const double full = numerics::gauss_hermite_expect_2d(g, 1.0, 1.0, n);
    const double coarse = numerics::gauss_hermite_expect_2d(g, 1.0, 1.0, extra);
    return std::pair<double, double>(full, coarse);
  };

  auto [e_mix, e_coarse] = tensor_mean(nodes, nodes / 2);
  if (!std::isfinite(e_mix) || !std::isfinite(e_coarse)) {
    std::tie(e_mix, e_coarse) = tensor_mean(2 * nodes, nodes);
    if (!std::isfinite(e_mix) || !std::isfinite(e_coarse)) {
      throw std::runtime_error("tensor quadrature did not produce a finite value");
    }
  }

  const auto et = expect_log_deriv(tx);
  const auto eu = expect_log_deriv(ty);
  const double mix_of_e = lambda * et.value + (1.0 - lambda) * eu.value;
  const double err = std::fabs(e_mix - e_coarse) + lambda * et.err + (1.0 - lambda) * eu.err;
  return {e_mix, mix_of_e, et.value, eu.value, err};
}

KnotheMap2D::KnotheMap2D(Transport1D t1, Transport1D t2, double shear,
                         std::optional<gaussian::CovMatrix> k)
    : t1_(std::move(t1)), t2_(std::move(t2)), shear_(shear), k_(std::move(k)) {}

KnotheMap2D KnotheMap2D::product(Transport1D t1, Transport1D t2) {
  return KnotheMap2D(std::move(t1), std::move(t2), 0.0, std::nullopt);
}

KnotheMap2D KnotheMap2D::gaussian_linear(Transport1D t1, Transport1D t2_conditional, double shear,
                                         gaussian::CovMatrix k) {
  return KnotheMap2D(std::move(t1), std::move(t2_conditional), shear, std::move(k));
}

std::array<double, 2> KnotheMap2D::operator()(const std::array<double, 2>& x) const {
  const double y1 = t1_(x[0]);
  double y2 = t2_(x[1]);
  if (k_) y2 += shear_ * y1;
  return {y1, y2};
}

double KnotheMap2D::log_det_jacobian(const std::array<double, 2>& x) const {
  // The shear only feeds the off-diagonal entry; the determinant is the
  // product of the diagonal derivatives.
  return t1_.log_deriv(x[0]) + t2_.log_deriv(x[1]);
}

double KnotheMap2D::diag_deriv(int i, const std::array<double, 2>& x) const {
  if (i == 0) return t1_.deriv(x[0]);
  if (i == 1) return t2_.deriv(x[1]);
  throw std::invalid_argument("diagonal index out of range");
}

const gaussian::CovMatrix& KnotheMap2D::target_covariance() const {
  if (!k_) throw std::logic_error("map has a product target");
  return *k_;
}

KnotheMap2D build_knothe_2d(const std::array<dist::Distribution1D, 2>& source,
                            const std::array<dist::Distribution1D, 2>& target) {
  return KnotheMap2D::product(build_transport(source[0], target[0]),
                              build_transport(source[1], target[1]));
}

KnotheMap2D build_knothe_2d(const std::array<dist::Distribution1D, 2>& source,
                            const gaussian::CovMatrix& target_covariance) {
  if (target_covariance.dim() != 2) throw std::invalid_argument("target covariance must be 2x2");
  const double k11 = target_covariance.m()(0, 0);
  const double k21 = target_covariance.m()(1, 0);
  const double k22 = target_covariance.m()(1, 1);

  // First coordinate goes to the first marginal N(0, k11); the second goes
  // to the conditional given the image point, N(shear * y1, k22 - k21^2/k11).
  // With a standard Gaussian source both components are linear and the map
  // is exactly the lower Cholesky factor.
  auto t1 = build_transport(source[0], dist::Distribution1D::gaussian(k11));
  auto t2 = build_transport(source[1], dist::Distribution1D::gaussian(k22 - k21 * k21 / k11));
  return KnotheMap2D::gaussian_linear(std::move(t1), std::move(t2), k21 / k11, target_covariance);
}

ChangeOfVariable2DReport verify_change_of_variable_2d(const KnotheMap2D& m) {
  // log det J splits into the two diagonal terms, so its expectation under
  // the product source splits into two 1-D expectations.
  const auto e1 = expect_log_deriv(m.first());
  const auto e2 = expect_log_deriv(m.second());
  const auto hs1 = entropy::diff_entropy(m.first().source());
  const auto hs2 = entropy::diff_entropy(m.second().source());

  double h_tgt = 0.0, tgt_err = 0.0;
  if (m.gaussian_target()) {
    h_tgt = gaussian::gaussian_entropy(m.target_covariance());
  } else {
    const auto ht1 = entropy::diff_entropy(m.first().target());
    const auto ht2 = entropy::diff_entropy(m.second().target());
    h_tgt = ht1.nats + ht2.nats;
    tgt_err = ht1.err + ht2.err;
  }

  const double e_log_det = e1.value + e2.value;
  const double residual = std::fabs(h_tgt - (hs1.nats + hs2.nats) - e_log_det);
  return {residual, e_log_det, e1.err + e2.err + hs1.err + hs2.err + tgt_err};
}

}  // namespace epilab::transport
