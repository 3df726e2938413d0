#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "epilab/dist.hpp"

namespace epilab::ineq {

enum class Verdict { holds, equality, violated_within_err, violated };
const char* to_string(Verdict v);

// Signed gaps are oriented so that gap >= 0 always means the claimed
// inequality holds, whichever way it was originally written. Order matters:
// a gap below -(err + tol) is a violation no matter how small err is, a gap
// inside max(err, tol) of zero is an equality case, and anything negative in
// between is a violation that the error budget can still explain.
Verdict classify(double gap, double err, double tol);

struct InequalityReport {
  std::string name;
  std::string inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double err = 0.0;
  double tol = 0.0;
  Verdict verdict = Verdict::holds;
};

struct ChainReport {
  std::string name;
  std::string inputs;
  std::vector<InequalityReport> steps;
  double total_gap = 0.0;      // sum of step gaps
  double reference_gap = 0.0;  // independently assembled value the total telescopes to
};

// N(X + Y) >= N(X) + N(Y)
InequalityReport epi_shannon(const dist::Distribution1D& X, const dist::Distribution1D& Y);

// h(sqrt(l) X + sqrt(1-l) Y) >= l h(X) + (1-l) h(Y)
InequalityReport epi_lieb(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                          double lambda);

// N(sqrt(l) X + sqrt(1-l) Y) >= l N(X) + (1-l) N(Y)
InequalityReport epi_power_concavity(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                                     double lambda);

// h(U | V) <= l h(X) + (1-l) h(Y) for the rotated pair (U, V)
InequalityReport reverse_epi(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                             double lambda);

// 0 <= h(U) - l h(X) - (1-l) h(Y) <= I(U; V), as a two-step chain
ChainReport deficit_sandwich(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                             double lambda);

// The transport decomposition of the Lieb gap. X and Y are realized as
// monotone maps of standard Gaussians X*, Y*; the steps are the two
// change-of-variable identities (residuals, scaled by their weights), the
// Jensen gap between E log of the mixed derivative and the mixed E logs,
// the conditioning gap, and the Gaussian-line residual. The five step gaps
// sum to the epi_lieb gap by construction.
ChainReport proof_chain(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                        double lambda);

struct EqualityDiagnostics {
  double t_deriv_spread = 0.0;  // max |T' - mean T'| over the probe grid
  double u_deriv_spread = 0.0;
  double lieb_gap = 0.0;
  bool equality_regime = false;
};

// Equality forces both transport derivatives to be constant (and equal);
// the diagnostics report how far each is from constant and whether the
// gap itself is at the equality level.
EqualityDiagnostics equality_diagnostics(const dist::Distribution1D& X,
                                         const dist::Distribution1D& Y, double lambda);

// The reverse inequality restated with the roles of X and Y permuted is a
// plain forward statement about h(V); the two gaps agree identically through
// h(U,V) = h(X) + h(Y). Reported as lhs = reverse gap, rhs = permuted gap,
// gap = their difference, expected verdict equality.
InequalityReport reverse_equivalence(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                                     double lambda);

// h(sum a_i X_i) >= sum a_i^2 h(X_i) for a unit vector a
InequalityReport zamir_feder(const std::vector<double>& a,
                             const std::vector<dist::Distribution1D>& xs);

// Matrix form with orthonormal rows, Gaussian components only:
// h(A X) >= sum_ij a_ij^2 h(X_j), both sides via covariance log-determinants.
InequalityReport zamir_feder_rows(const Eigen::MatrixXd& a,
                                  const std::vector<dist::Distribution1D>& xs);

// Renyi analogue: h_r(sqrt(l) X + sqrt(1-l) Y) - l h_p(X) - (1-l) h_q(Y),
// compared against the same expression at unit Gaussians, which is the
// conjectured minimum. p and q are solved from 1/p' = l/r', 1/q' = (1-l)/r'.
InequalityReport renyi_epi(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                           double lambda, double r);

// Sharp Young (p, q, r > 1) or its reverse (all in (0,1)):
// C_r ||f*g||_r <= C_p ||f||_p C_q ||g||_q, reversed in the reverse regime.
InequalityReport young_check(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                             double p, double q, double r);

}  // namespace epilab::ineq
