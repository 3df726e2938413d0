#include "epilab/gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "epilab/kernels.hpp"

namespace epilab::gaussian {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

void require_square(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument("covariance must be square and non-empty");
  }
}

}  // namespace

bool cholesky_lower(const Eigen::MatrixXd& a, Eigen::MatrixXd& l) {
  const auto n = a.rows();
  double max_diag = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  if (!(max_diag > 0.0)) return false;
  // Pivots must clear 1e-12 of the largest diagonal entry. Matrices that
  // fail are rejected outright; regularizing here would hide genuine
  // violations in everything built on top.
  const double min_pivot = 1e-12 * max_diag;

  l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > min_pivot * min_pivot)) return false;
    l(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

CovMatrix::CovMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  require_square(m_);
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("covariance must be symmetric");
  }
  if (!epilab::gaussian::cholesky_lower(m_, chol_)) {
    throw std::domain_error("covariance is not positive definite");
  }
  log_det_ = 0.0;
  for (Eigen::Index i = 0; i < m_.rows(); ++i) log_det_ += 2.0 * std::log(chol_(i, i));
}

CovMatrix CovMatrix::identity(int n) { return CovMatrix(Eigen::MatrixXd::Identity(n, n)); }

double CovMatrix::det() const { return std::exp(log_det_); }

Eigen::MatrixXd CovMatrix::inverse() const {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dim(), dim());
  const Eigen::MatrixXd y = chol_.triangularView<Eigen::Lower>().solve(eye);
  return chol_.transpose().triangularView<Eigen::Upper>().solve(y);
}

double gaussian_entropy(const CovMatrix& k) {
  return 0.5 * (k.dim() * (kLog2Pi + 1.0) + k.log_det());
}

RotatedCovariances rotated_covariances(const CovMatrix& kx, const CovMatrix& ky, double lambda) {
  if (kx.dim() != ky.dim()) throw std::invalid_argument("covariance dimensions differ");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0,1)");
  const double mu = 1.0 - lambda;
  CovMatrix ku(lambda * kx.m() + mu * ky.m());
  CovMatrix kv(mu * kx.m() + lambda * ky.m());
  Eigen::MatrixXd kuv = std::sqrt(lambda * mu) * (ky.m() - kx.m());
  return {std::move(ku), std::move(kv), std::move(kuv)};
}

CovMatrix schur_conditional(const CovMatrix& ku, const CovMatrix& kv, const Eigen::MatrixXd& kuv) {
  if (kuv.rows() != ku.dim() || kuv.cols() != kv.dim()) {
    throw std::invalid_argument("cross-covariance dimensions differ");
  }
  Eigen::MatrixXd s = ku.m() - kuv * kv.inverse() * kuv.transpose();
  // The exact complement is symmetric; the floating-point product is not.
  s = 0.5 * (s + s.transpose()).eval();
  return CovMatrix(std::move(s));
}

/* For the rotated pair the conditional covariance collapses to a harmonic
 * mean:
 *
 *   K_{U|V} = lKX + mKY - lm (KY-KX) [mKX + lKY]^{-1} (KY-KX),   m = 1-l,
 *
 * and expanding (KY-KX) [mKX+lKY]^{-1} (KY-KX) against lKX+mKY shows the
 * whole expression equals [l KX^{-1} + m KY^{-1}]^{-1}. We compute both
 * sides independently and report the Frobenius distance.
 */
double harmonic_identity_gap(const CovMatrix& kx, const CovMatrix& ky, double lambda) {
  const RotatedCovariances r = rotated_covariances(kx, ky, lambda);
  const CovMatrix schur = schur_conditional(r.ku, r.kv, r.kuv);

  Eigen::MatrixXd inv_mix = lambda * kx.inverse() + (1.0 - lambda) * ky.inverse();
  inv_mix = 0.5 * (inv_mix + inv_mix.transpose()).eval();
  const Eigen::MatrixXd harmonic = CovMatrix(std::move(inv_mix)).inverse();

  return (schur.m() - harmonic).norm();
}

DetMeanChain det_mean_chain(const CovMatrix& kx, const CovMatrix& ky, double lambda) {
  if (kx.dim() != ky.dim()) throw std::invalid_argument("covariance dimensions differ");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0,1)");
  const double mu = 1.0 - lambda;

  Eigen::MatrixXd inv_mix = lambda * kx.inverse() + mu * ky.inverse();
  inv_mix = 0.5 * (inv_mix + inv_mix.transpose()).eval();
  const double harmonic = std::exp(-CovMatrix(std::move(inv_mix)).log_det());
  const double geometric = std::exp(lambda * kx.log_det() + mu * ky.log_det());
  const double arithmetic = std::exp(CovMatrix(lambda * kx.m() + mu * ky.m()).log_det());
  return {harmonic, geometric, arithmetic};
}

double bernstein_gaussian_mi(const CovMatrix& kx, const CovMatrix& ky, double lambda) {
  const RotatedCovariances r = rotated_covariances(kx, ky, lambda);
  const int n = kx.dim();
  Eigen::MatrixXd joint(2 * n, 2 * n);
  joint.topLeftCorner(n, n) = r.ku.m();
  joint.topRightCorner(n, n) = r.kuv;
  joint.bottomLeftCorner(n, n) = r.kuv.transpose();
  joint.bottomRightCorner(n, n) = r.kv.m();
  // Equal input covariances make KUV vanish, the joint factor block
  // diagonal, and the three log-determinants cancel to an exact zero.
  const CovMatrix kj(std::move(joint));
  return 0.5 * (r.ku.log_det() + r.kv.log_det() - kj.log_det());
}

CovMatrix random_spd(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  kernels::Rng rng(seed);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  }
  return CovMatrix(a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n));
}

}  // namespace epilab::gaussian
