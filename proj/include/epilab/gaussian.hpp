#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace epilab::gaussian {

// Symmetric positive definite covariance. SPD is established at construction
// by a hand-rolled Cholesky whose pivots must exceed 1e-12 * max diagonal;
// failures are rejected, never regularized.
class CovMatrix {
 public:
  explicit CovMatrix(Eigen::MatrixXd m);
  static CovMatrix identity(int n);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& m() const { return m_; }
  const Eigen::MatrixXd& cholesky_lower() const { return chol_; }
  double log_det() const { return log_det_; }
  double det() const;
  Eigen::MatrixXd inverse() const;

 private:
  Eigen::MatrixXd m_;
  Eigen::MatrixXd chol_;
  double log_det_ = 0.0;
};

// Lower Cholesky factor with the pivot policy above; returns false instead of
// factoring when the matrix is not SPD under that policy.
bool cholesky_lower(const Eigen::MatrixXd& a, Eigen::MatrixXd& l);

// h = 1/2 log((2 pi e)^n |K|)
double gaussian_entropy(const CovMatrix& k);

struct RotatedCovariances {
  CovMatrix ku;
  CovMatrix kv;
  Eigen::MatrixXd kuv;  // symmetric but generally indefinite
};

// U = sqrt(l) X + sqrt(1-l) Y, V = -sqrt(1-l) X + sqrt(l) Y for independent
// Gaussian vectors: KU = l KX + (1-l) KY, KV with the roles swapped,
// KUV = sqrt(l(1-l)) (KY - KX).
RotatedCovariances rotated_covariances(const CovMatrix& kx, const CovMatrix& ky, double lambda);

// K_{U|V} = KU - KUV KV^{-1} KVU
CovMatrix schur_conditional(const CovMatrix& ku, const CovMatrix& kv, const Eigen::MatrixXd& kuv);

// Frobenius norm of K_{U|V} - [l KX^{-1} + (1-l) KY^{-1}]^{-1}; an identity,
// so the result is round-off sized.
double harmonic_identity_gap(const CovMatrix& kx, const CovMatrix& ky, double lambda);

struct DetMeanChain {
  double harmonic;
  double geometric;
  double arithmetic;
};

// |l KX^{-1}+(1-l)KY^{-1}|^{-1} <= |KX|^l |KY|^{1-l} <= |l KX+(1-l)KY|,
// computed through log-determinants.
DetMeanChain det_mean_chain(const CovMatrix& kx, const CovMatrix& ky, double lambda);

// I(U;V) = 1/2 log(|KU||KV|/|K_joint|); zero exactly when KX = KY.
double bernstein_gaussian_mi(const CovMatrix& kx, const CovMatrix& ky, double lambda);

// A A^T + 0.1 I with A filled from seeded standard normals; the generator
// behind every seeded SPD property sweep.
CovMatrix random_spd(int n, std::uint64_t seed);

}  // namespace epilab::gaussian
