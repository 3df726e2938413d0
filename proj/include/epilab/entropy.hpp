#pragma once

#include <cstddef>
#include <vector>

#include "epilab/dist.hpp"
#include "epilab/numerics.hpp"

namespace epilab::entropy {

enum class Method { closed_form, quadrature, grid };

struct EntropyValue {
  double nats = 0.0;
  Method method = Method::closed_form;
  double err = 0.0;  // closed forms carry 0, estimators carry their bound
};

// Closed form for Gaussian/Laplace/Logistic; adaptive quadrature for
// mixtures (err <= 1e-8 including the truncated-tail bound).
EntropyValue diff_entropy(const dist::Distribution1D& d);

// N = e^{2h} / (2 pi e)
double entropy_power(const dist::Distribution1D& d);
double entropy_power_from(double nats);

// Order-p Renyi entropy from a grid density; the two equivalent formulas
// (1/(1-p)) log int f^p and -p' log ||f||_p are both evaluated and must agree
// within 1e-10. The Distribution1D overload widens the grid to
// 14/min(1,p) sigmas (capped at 24) so the fat tails of f^p for p < 1 are
// still covered.
EntropyValue renyi_entropy(const numerics::GridDensity& f, double p);
EntropyValue renyi_entropy(const dist::Distribution1D& d, double p,
                           std::size_t n = std::size_t{1} << 16);

// Density of sum a_i X_i on a shared lattice: every component a_i X_i is
// placed on the same grid (common dx, 0 on a node) spanning
// half_width_sigmas * sigma of the combination, then the components are
// convolved and the entropy read off the grid. Entries with a_i = 0 are
// skipped.
EntropyValue entropy_of_combo(const std::vector<double>& coeffs,
                              const std::vector<dist::Distribution1D>& dists,
                              std::size_t n = std::size_t{1} << 16, double half_width_sigmas = 14.0);

// Grid density of the combination itself, for callers that need norms of the
// sum density rather than its entropy.
numerics::GridDensity combo_density(const std::vector<double>& coeffs,
                                    const std::vector<dist::Distribution1D>& dists,
                                    std::size_t n = std::size_t{1} << 16,
                                    double half_width_sigmas = 14.0);

struct RotatedPairReport {
  double lambda = 0.5;
  EntropyValue hU, hV, hUV, hU_given_V, mutual_info;
};

// U = sqrt(l) X + sqrt(1-l) Y, V = -sqrt(1-l) X + sqrt(l) Y. hU and hV come
// from the grid pipeline; hUV is h(X)+h(Y) exactly (the rotation has unit
// Jacobian); the conditional entropy and mutual information follow by the
// chain rule.
RotatedPairReport rotated_pair(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                               double lambda);

// Direct 2-D trapezoid of -p log p for the joint density of (U, V);
// independent cross-check of the hUV identity, accurate to ~1e-4.
double rotated_pair_joint_entropy_2d(const dist::Distribution1D& X,
                                     const dist::Distribution1D& Y, double lambda,
                                     std::size_t n = std::size_t{1} << 10,
                                     double half_width_sigmas = 12.0);

}  // namespace epilab::entropy
