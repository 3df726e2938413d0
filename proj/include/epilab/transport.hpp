#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "epilab/dist.hpp"
#include "epilab/gaussian.hpp"

namespace epilab::transport {

// Monotone quantile coupling T = F_target^{-1} o F_source. T pushes the
// source law forward onto the target law and is strictly increasing; its
// derivative is the ratio of the two densities along the map.
class Transport1D {
 public:
  Transport1D(dist::Distribution1D source, dist::Distribution1D target);

  double operator()(double x) const;
  // pdf_source(x) / pdf_target(T(x)), evaluated in log space first; the
  // direct ratio underflows far out in the tails.
  double deriv(double x) const;
  double log_deriv(double x) const;

  const dist::Distribution1D& source() const { return src_; }
  const dist::Distribution1D& target() const { return tgt_; }

 private:
  dist::Distribution1D src_;
  dist::Distribution1D tgt_;
};

Transport1D build_transport(const dist::Distribution1D& source, const dist::Distribution1D& target);

// E_source{log T'} by adaptive quadrature over +-10 sigma of the source,
// with the discarded tail mass folded into err.
struct ExpectationResult {
  double value;
  double err;
};
ExpectationResult expect_log_deriv(const Transport1D& t);

struct ChangeOfVariableReport {
  double residual;     // |h(target) - h(source) - E log T'|
  double e_log_deriv;  // the quadrature expectation itself
  double err;
};
ChangeOfVariableReport verify_change_of_variable(const Transport1D& t);

// Both expectations behind the Jensen step, over independent standard
// Gaussian sources: e_mix = E log(l T'(X) + (1-l) U'(Y)) by tensor
// Gauss-Hermite, mix_of_e = l E log T' + (1-l) E log U' by adaptive
// quadrature. e_mix >= mix_of_e up to err; they coincide exactly when both
// derivatives are the same constant.
struct JensenReport {
  double e_mix;
  double mix_of_e;
  double e_log_t;  // E{log T'}, reused by callers that need the addends
  double e_log_u;
  double err;
};
JensenReport jensen_expectation(const Transport1D& tx, const Transport1D& ty, double lambda,
                                std::size_t nodes = 256);

// Triangular map between planar laws with independent source coordinates.
// The first component transports the first marginal; the second transports
// the second source coordinate onto the target's conditional law given the
// image of the first. Product targets keep the components independent; a
// bivariate Gaussian target adds a linear shear, and for a standard Gaussian
// source the whole map collapses to x -> Lx with L the lower Cholesky
// factor of the target covariance.
class KnotheMap2D {
 public:
  static KnotheMap2D product(Transport1D t1, Transport1D t2);
  static KnotheMap2D gaussian_linear(Transport1D t1, Transport1D t2_conditional, double shear,
                                     gaussian::CovMatrix k);

  std::array<double, 2> operator()(const std::array<double, 2>& x) const;
  // log of the Jacobian determinant, the sum of the two diagonal log
  // derivatives; the Jacobian is lower triangular.
  double log_det_jacobian(const std::array<double, 2>& x) const;
  double diag_deriv(int i, const std::array<double, 2>& x) const;

  const Transport1D& first() const { return t1_; }
  const Transport1D& second() const { return t2_; }
  double shear() const { return shear_; }
  bool gaussian_target() const { return k_.has_value(); }
  const gaussian::CovMatrix& target_covariance() const;

 private:
  KnotheMap2D(Transport1D t1, Transport1D t2, double shear, std::optional<gaussian::CovMatrix> k);

  Transport1D t1_;
  Transport1D t2_;
  double shear_;
  std::optional<gaussian::CovMatrix> k_;
};

KnotheMap2D build_knothe_2d(const std::array<dist::Distribution1D, 2>& source,
                            const std::array<dist::Distribution1D, 2>& target);
KnotheMap2D build_knothe_2d(const std::array<dist::Distribution1D, 2>& source,
                            const gaussian::CovMatrix& target_covariance);

struct ChangeOfVariable2DReport {
  double residual;  // |h(target) - h(source) - E log det J|
  double e_log_det;
  double err;
};
ChangeOfVariable2DReport verify_change_of_variable_2d(const KnotheMap2D& m);

}  // namespace epilab::transport
