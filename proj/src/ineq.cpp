#include "epilab/ineq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "epilab/entropy.hpp"
#include "epilab/gaussian.hpp"
#include "epilab/numerics.hpp"
#include "epilab/transport.hpp"

namespace epilab::ineq {

namespace {

// Grid-backed quantities get the loose default, closed-form chains the tight
// one; every report carries the tolerance it was judged against.
constexpr double kGridTol = 1e-5;
constexpr double kClosedTol = 1e-9;

void require_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("lambda must lie strictly inside (0,1)");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string pair_inputs(const dist::Distribution1D& X, const dist::Distribution1D& Y) {
  return "X=" + X.describe() + "; Y=" + Y.describe();
}

std::string pair_inputs(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                        double lambda) {
  return pair_inputs(X, Y) + "; lambda=" + fmt(lambda);
}

double power_err(double nats, double entropy_err) {
  // N = e^{2h}/(2 pi e), so dN = 2 N dh
  return 2.0 * entropy::entropy_power_from(nats) * entropy_err;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::equality: return "equality";
    case Verdict::violated_within_err: return "violated_within_err";
    case Verdict::violated: return "violated";
  }
  return "unknown";
}

Verdict classify(double gap, double err, double tol) {
  if (gap < -(err + tol)) return Verdict::violated;
  if (std::fabs(gap) <= std::max(err, tol)) return Verdict::equality;
  if (gap < 0.0) return Verdict::violated_within_err;
  return Verdict::holds;
}

InequalityReport epi_shannon(const dist::Distribution1D& X, const dist::Distribution1D& Y) {
  const auto hxy = entropy::entropy_of_combo({1.0, 1.0}, {X, Y});
  const auto hx = entropy::diff_entropy(X);
  const auto hy = entropy::diff_entropy(Y);

  InequalityReport rep;
  rep.name = "epi_shannon";
  rep.inputs = pair_inputs(X, Y);
  rep.lhs = entropy::entropy_power_from(hxy.nats);
  rep.rhs = entropy::entropy_power_from(hx.nats) + entropy::entropy_power_from(hy.nats);
  rep.gap = rep.lhs - rep.rhs;
  rep.err = power_err(hxy.nats, hxy.err) + power_err(hx.nats, hx.err) + power_err(hy.nats, hy.err);
  rep.tol = kGridTol;
  rep.verdict = classify(rep.gap, rep.err, rep.tol);
  return rep;
}

InequalityReport epi_lieb(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                          double lambda) {
  require_lambda(lambda);
  const double mu = 1.0 - lambda;
  const auto hu = entropy::entropy_of_combo({std::sqrt(lambda), std::sqrt(mu)}, {X, Y});
  const auto hx = entropy::diff_entropy(X);
  const auto hy = entropy::diff_entropy(Y);

  InequalityReport rep;
  rep.name = "epi_lieb";
  rep.inputs = pair_inputs(X, Y, lambda);
  rep.lhs = hu.nats;
  rep.rhs = lambda * hx.nats + mu * hy.nats;
  rep.gap = rep.lhs - rep.rhs;
  rep.err = hu.err + lambda * hx.err + mu * hy.err;
  rep.tol = kGridTol;
  rep.verdict = classify(rep.gap, rep.err, rep.tol);
  return rep;
}

InequalityReport epi_power_concavity(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                                     double lambda) {
  require_lambda(lambda);
  const double mu = 1.0 - lambda;
  const auto hu = entropy::entropy_of_combo({std::sqrt(lambda), std::sqrt(mu)}, {X, Y});
  const auto hx = entropy::diff_entropy(X);
  const auto hy = entropy::diff_entropy(Y);

  InequalityReport rep;
  rep.name = "epi_power_concavity";
  rep.inputs = pair_inputs(X, Y, lambda);
  rep.lhs = entropy::entropy_power_from(hu.nats);
  rep.rhs = lambda * entropy::entropy_power_from(hx.nats) + mu * entropy::entropy_power_from(hy.nats);
  rep.gap = rep.lhs - rep.rhs;
  rep.err = power_err(hu.nats, hu.err) + lambda * power_err(hx.nats, hx.err) +
            mu * power_err(hy.nats, hy.err);
  rep.tol = kGridTol;
  rep.verdict = classify(rep.gap, rep.err, rep.tol);
  return rep;
}

InequalityReport reverse_epi(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                             double lambda) {
  require_lambda(lambda);
  const double mu = 1.0 - lambda;
  const auto rot = entropy::rotated_pair(X, Y, lambda);
  const auto hx = entropy::diff_entropy(X);
  const auto hy = entropy::diff_entropy(Y);

  InequalityReport rep;
  rep.name = "reverse_epi";
  rep.inputs = pair_inputs(X, Y, lambda);
  rep.lhs = rot.hU_given_V.nats;
  rep.rhs = lambda * hx.nats + mu * hy.nats;
  // The claim runs the other way: the conditional entropy sits below the mix.
  rep.gap = rep.rhs - rep.lhs;
  rep.err = rot.hU_given_V.err + lambda * hx.err + mu * hy.err;
  rep.tol = kGridTol;
  rep.verdict = classify(rep.gap, rep.err, rep.tol);
  return rep;
}

ChainReport deficit_sandwich(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                             double lambda) {
  require_lambda(lambda);
  const double mu = 1.0 - lambda;
  const auto rot = entropy::rotated_pair(X, Y, lambda);
  const auto hx = entropy::diff_entropy(X);
  const auto hy = entropy::diff_entropy(Y);
  const double mix = lambda * hx.nats + mu * hy.nats;
  const double mix_err = lambda * hx.err + mu * hy.err;
  const double deficit = rot.hU.nats - mix;

  ChainReport chain;
  chain.name = "deficit_sandwich";
  chain.inputs = pair_inputs(X, Y, lambda);

  InequalityReport lower;
  lower.name = "deficit_nonneg";
  lower.inputs = chain.inputs;
  lower.lhs = rot.hU.nats;
  lower.rhs = mix;
  lower.gap = deficit;
  lower.err = rot.hU.err + mix_err;
  lower.tol = kGridTol;
  lower.verdict = classify(lower.gap, lower.err, lower.tol);

  InequalityReport upper;
  upper.name = "deficit_le_mi";
  upper.inputs = chain.inputs;
  upper.lhs = deficit;
  upper.rhs = rot.mutual_info.nats;
  upper.gap = rot.mutual_info.nats - deficit;
  upper.err = rot.mutual_info.err + lower.err;
  upper.tol = kGridTol;
  upper.verdict = classify(upper.gap, upper.err, upper.tol);

  chain.steps = {lower, upper};
  chain.total_gap = lower.gap + upper.gap;
  chain.reference_gap = rot.mutual_info.nats;
  return chain;
}

ChainReport proof_chain(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                        double lambda) {
  require_lambda(lambda);
  const double mu = 1.0 - lambda;
  const auto G1 = dist::Distribution1D::gaussian(1.0);
  const double sl = std::sqrt(lambda);
  const double sm = std::sqrt(mu);

  const auto run = [](const char* stage, auto&& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("proof_chain step ") + stage + ": " + e.what());
    }
  };

  const auto tT = run("transport_identity_x", [&] { return transport::build_transport(G1, X); });
  const auto tU = run("transport_identity_y", [&] { return transport::build_transport(G1, Y); });
  const auto jr = run("jensen", [&] { return transport::jensen_expectation(tT, tU, lambda); });
  const auto et = run("transport_identity_x", [&] { return transport::expect_log_deriv(tT); });
  const auto eu = run("transport_identity_y", [&] { return transport::expect_log_deriv(tU); });
  const auto hu =
      run("conditioning", [&] { return entropy::entropy_of_combo({sl, sm}, {X, Y}); });
  const auto hgline =
      run("gaussian_line", [&] { return entropy::entropy_of_combo({sl, sm}, {G1, G1}); });
  const auto hx = entropy::diff_entropy(X);
  const auto hy = entropy::diff_entropy(Y);
  const double hg = entropy::diff_entropy(G1).nats;

  ChainReport chain;
  chain.name = "proof_chain";
  chain.inputs = pair_inputs(X, Y, lambda);

  // Every step gap below is assembled from the same shared doubles, so the
  // five of them telescope to hu - (l hx + (1-l) hy) up to a last-place
  // rounding in the lambda weights.
  InequalityReport sx;
  sx.name = "transport_identity_x";
  sx.inputs = chain.inputs + "; residual=" + fmt(hg + jr.e_log_t - hx.nats);
  sx.lhs = lambda * (hg + jr.e_log_t);
  sx.rhs = lambda * hx.nats;
  sx.gap = sx.lhs - sx.rhs;
  sx.err = lambda * (et.err + hx.err);
  sx.tol = kGridTol;
  sx.verdict = classify(sx.gap, sx.err, sx.tol);

  InequalityReport sy;
  sy.name = "transport_identity_y";
  sy.inputs = chain.inputs + "; residual=" + fmt(hg + jr.e_log_u - hy.nats);
  sy.lhs = mu * (hg + jr.e_log_u);
  sy.rhs = mu * hy.nats;
  sy.gap = sy.lhs - sy.rhs;
  sy.err = mu * (eu.err + hy.err);
  sy.tol = kGridTol;
  sy.verdict = classify(sy.gap, sy.err, sy.tol);

  InequalityReport sj;
  sj.name = "jensen";
  sj.inputs = chain.inputs;
  sj.lhs = jr.e_mix;
  sj.rhs = jr.mix_of_e;
  sj.gap = sj.lhs - sj.rhs;
  sj.err = jr.err;
  sj.tol = kGridTol;
  sj.verdict = classify(sj.gap, sj.err, sj.tol);

  InequalityReport sc;
  sc.name = "conditioning";
  sc.inputs = chain.inputs;
  sc.lhs = hu.nats;
  sc.rhs = hgline.nats + jr.e_mix;
  sc.gap = sc.lhs - sc.rhs;
  sc.err = hu.err + hgline.err + jr.err;
  sc.tol = kGridTol;
  sc.verdict = classify(sc.gap, sc.err, sc.tol);

  InequalityReport sg;
  sg.name = "gaussian_line";
  sg.inputs = chain.inputs;
  sg.lhs = hgline.nats;
  sg.rhs = hg;
  sg.gap = sg.lhs - sg.rhs;
  sg.err = hgline.err;
  sg.tol = 1e-6;
  sg.verdict = classify(sg.gap, sg.err, sg.tol);

  chain.steps = {sx, sy, sj, sc, sg};
  chain.total_gap = sx.gap + sy.gap + sj.gap + sc.gap + sg.gap;
  chain.reference_gap = hu.nats - (lambda * hx.nats + mu * hy.nats);
  return chain;
}

EqualityDiagnostics equality_diagnostics(const dist::Distribution1D& X,
                                         const dist::Distribution1D& Y, double lambda) {
  require_lambda(lambda);
  const auto G1 = dist::Distribution1D::gaussian(1.0);
  const auto tT = transport::build_transport(G1, X);
  const auto tU = transport::build_transport(G1, Y);

  constexpr int kProbes = 4097;
  const auto spread = [&](const transport::Transport1D& t) {
    std::vector<double> v(kProbes);
    double mean = 0.0;
    for (int i = 0; i < kProbes; ++i) {
      const double x = -6.0 + 12.0 * i / (kProbes - 1);
      v[i] = t.deriv(x);
      mean += v[i];
    }
    mean /= kProbes;
    double worst = 0.0;
    for (double d : v) worst = std::max(worst, std::fabs(d - mean));
    return worst;
  };

  EqualityDiagnostics diag;
  diag.t_deriv_spread = spread(tT);
  diag.u_deriv_spread = spread(tU);
  diag.lieb_gap = epi_lieb(X, Y, lambda).gap;
  diag.equality_regime = diag.t_deriv_spread < 1e-6 && diag.u_deriv_spread < 1e-6 &&
                         std::fabs(diag.lieb_gap) < 1e-6;
  return diag;
}

InequalityReport reverse_equivalence(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                                     double lambda) {
  require_lambda(lambda);
  const double mu = 1.0 - lambda;
  const auto rot = entropy::rotated_pair(X, Y, lambda);
  const auto hx = entropy::diff_entropy(X);
  const auto hy = entropy::diff_entropy(Y);

  // Both gaps reduce to h(V) - ((1-l) h(X) + l h(Y)) through the joint
  // entropy identity; only the floating-point assembly differs.
  const double reverse_gap = lambda * hx.nats + mu * hy.nats - rot.hU_given_V.nats;
  const double permuted_gap = rot.hV.nats - (mu * hx.nats + lambda * hy.nats);

  InequalityReport rep;
  rep.name = "reverse_equivalence";
  rep.inputs = pair_inputs(X, Y, lambda);
  rep.lhs = reverse_gap;
  rep.rhs = permuted_gap;
  rep.gap = reverse_gap - permuted_gap;
  rep.err = rot.hU_given_V.err + rot.hV.err + hx.err + hy.err;
  rep.tol = 1e-6;
  rep.verdict = classify(rep.gap, rep.err, rep.tol);
  return rep;
}

InequalityReport zamir_feder(const std::vector<double>& a,
                             const std::vector<dist::Distribution1D>& xs) {
  if (a.empty() || a.size() != xs.size()) {
    throw std::invalid_argument("coefficient and distribution counts differ");
  }
  double s2 = 0.0;
  for (double c : a) s2 += c * c;
  if (std::fabs(s2 - 1.0) > 1e-10) {
    throw std::invalid_argument("coefficients must form a unit vector");
  }

  const auto h = entropy::entropy_of_combo(a, xs);
  double rhs = 0.0, rhs_err = 0.0;
  std::string echo = "a=[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto hi = entropy::diff_entropy(xs[i]);
    rhs += a[i] * a[i] * hi.nats;
    rhs_err += a[i] * a[i] * hi.err;
    echo += (i ? ", " : "") + fmt(a[i]);
  }
  echo += "]; X=[";
  for (std::size_t i = 0; i < xs.size(); ++i) echo += (i ? ", " : "") + xs[i].describe();
  echo += "]";

  InequalityReport rep;
  rep.name = "zamir_feder";
  rep.inputs = echo;
  rep.lhs = h.nats;
  rep.rhs = rhs;
  rep.gap = rep.lhs - rep.rhs;
  rep.err = h.err + rhs_err;
  rep.tol = kGridTol;
  rep.verdict = classify(rep.gap, rep.err, rep.tol);
  return rep;
}

InequalityReport zamir_feder_rows(const Eigen::MatrixXd& a,
                                  const std::vector<dist::Distribution1D>& xs) {
  const auto m = a.rows();
  const auto n = a.cols();
  if (n != static_cast<Eigen::Index>(xs.size()) || m < 1) {
    throw std::invalid_argument("matrix shape does not match component count");
  }
  for (const auto& x : xs) {
    if (x.family() != dist::Family::gaussian) {
      throw std::invalid_argument("matrix form requires Gaussian components");
    }
  }
  if ((a * a.transpose() - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("rows must be orthonormal");
  }

  Eigen::VectorXd powers(n);
  for (Eigen::Index j = 0; j < n; ++j) powers[j] = xs[j].power();
  Eigen::MatrixXd cov = a * powers.asDiagonal() * a.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  const double lhs = gaussian::gaussian_entropy(gaussian::CovMatrix(cov));

  double rhs = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      rhs += a(i, j) * a(i, j) * entropy::diff_entropy(xs[j]).nats;
    }
  }

  InequalityReport rep;
  rep.name = "zamir_feder_rows";
  rep.inputs = "A(" + std::to_string(m) + "x" + std::to_string(n) + ") orthonormal rows; X=[";
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j > 0) rep.inputs += ", ";
    rep.inputs += xs[j].describe();
  }
  rep.inputs += "]";
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.gap = lhs - rhs;
  rep.err = 1e-13 * (std::fabs(lhs) + std::fabs(rhs));
  rep.tol = kClosedTol;
  rep.verdict = classify(rep.gap, rep.err, rep.tol);
  return rep;
}

InequalityReport renyi_epi(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                           double lambda, double r) {
  require_lambda(lambda);
  if (!(r > 0.0) || r == 1.0) {
    throw std::invalid_argument("order r must be positive and different from 1");
  }
  const double mu = 1.0 - lambda;
  // 1/p' = lambda/r', 1/q' = (1-lambda)/r' solved for p and q
  const double p = r / (r - lambda * (r - 1.0));
  const double q = r / (r - mu * (r - 1.0));
  const bool forward = r > 1.0;
  if ((forward && !(p > 1.0 && q > 1.0)) || (!forward && !(p < 1.0 && q < 1.0 && p > 0.0 && q > 0.0))) {
    throw std::invalid_argument("conjugate exponent relation has no solution in this regime");
  }

  const double hw = std::min(14.0 / std::min({1.0, p, q, r}), 24.0);
  double err = 0.0;
  const auto expr = [&](const dist::Distribution1D& A, const dist::Distribution1D& B) {
    const auto g =
        entropy::combo_density({std::sqrt(lambda), std::sqrt(mu)}, {A, B}, std::size_t{1} << 16, hw);
    const auto hr = entropy::renyi_entropy(g, r);
    const auto hp = entropy::renyi_entropy(A, p);
    const auto hq = entropy::renyi_entropy(B, q);
    err += hr.err + lambda * hp.err + mu * hq.err;
    return hr.nats - lambda * hp.nats - mu * hq.nats;
  };

  const auto G1 = dist::Distribution1D::gaussian(1.0);
  InequalityReport rep;
  rep.name = "renyi_epi";
  rep.inputs = pair_inputs(X, Y, lambda) + "; r=" + fmt(r) + "; p=" + fmt(p) + "; q=" + fmt(q);
  rep.lhs = expr(X, Y);
  // Same numerical route on the Gaussian side, so the Gaussian-input case
  // cancels to an exact zero instead of inheriting two grids' biases.
  rep.rhs = expr(G1, G1);
  rep.gap = rep.lhs - rep.rhs;
  rep.err = err;
  rep.tol = kGridTol;
  rep.verdict = classify(rep.gap, rep.err, rep.tol);
  return rep;
}

namespace {

double young_constant(double s) {
  const double sp = s / (s - 1.0);
  return std::sqrt(std::pow(s, 1.0 / s) / std::pow(std::fabs(sp), 1.0 / sp));
}

}  // namespace

InequalityReport young_check(const dist::Distribution1D& X, const dist::Distribution1D& Y,
                             double p, double q, double r) {
  if (std::fabs(1.0 / p + 1.0 / q - 1.0 - 1.0 / r) > 1e-10) {
    throw std::invalid_argument("exponents violate 1/p + 1/q = 1 + 1/r");
  }
  const bool forward = p > 1.0 && q > 1.0 && r > 1.0;
  const bool reverse = p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0 && r > 0.0 && r < 1.0;
  if (!forward && !reverse) {
    throw std::invalid_argument("exponents must all exceed 1 or all lie inside (0,1)");
  }

  // f^s with s < 1 decays slower than f; widen the window accordingly.
  const double hw = std::min(14.0 / std::min({1.0, p, q, r}), 24.0);
  const auto fx = numerics::grid_density(X, hw, std::size_t{1} << 16);
  const auto fy = numerics::grid_density(Y, hw, std::size_t{1} << 16);
  const auto conv = entropy::combo_density({1.0, 1.0}, {X, Y}, std::size_t{1} << 16, hw);

  const double lhs = young_constant(r) * numerics::lp_norm(conv, r);
  const double rhs = young_constant(p) * numerics::lp_norm(fx, p) * young_constant(q) *
                     numerics::lp_norm(fy, q);

  InequalityReport rep;
  rep.name = "young_check";
  rep.inputs = pair_inputs(X, Y) + "; p=" + fmt(p) + "; q=" + fmt(q) + "; r=" + fmt(r) +
               "; ratio=" + fmt(lhs / rhs);
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.gap = forward ? rep.rhs - rep.lhs : rep.lhs - rep.rhs;
  rep.err = 1e-6 * (lhs + rhs);
  rep.tol = kGridTol;
  rep.verdict = classify(rep.gap, rep.err, rep.tol);
  return rep;
}

}  // namespace epilab::ineq
