#include "epilab/kernels.hpp"

#include <omp.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace epilab::kernels {

double kahan_sum(const double* data, std::size_t n) {
  // Neumaier variant: the correction survives even when the running sum is
  // cancelled away by a later addend, which plain Kahan compensation loses.
  double sum = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = data[i];
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

namespace {

double combine_blocks(const std::vector<double>& partial) {
  // Block partials merged in index order; the merge itself is compensated so
  // the block count (hence thread count) cannot perturb the result.
  return kahan_sum(partial.data(), partial.size());
}

}  // namespace

double block_sum_serial(const double* data, std::size_t n) {
  std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
  for (std::size_t b = 0; b < nblocks; ++b) {
    std::size_t lo = b * kBlock;
    std::size_t hi = std::min(n, lo + kBlock);
    partial[b] = kahan_sum(data + lo, hi - lo);
  }
  return combine_blocks(partial);
}

double block_sum(const double* data, std::size_t n) {
  if (n == 0) return 0.0;
  std::size_t nblocks = (n + kBlock - 1) / kBlock;
  if (nblocks < 4 || omp_in_parallel()) return block_sum_serial(data, n);
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
    std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    std::size_t hi = std::min(n, lo + kBlock);
    partial[static_cast<std::size_t>(b)] = kahan_sum(data + lo, hi - lo);
  }
  return combine_blocks(partial);
}

void parallel_fill(std::vector<double>& out, const std::function<double(std::size_t)>& f) {
  std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
  if (n < 1024 || omp_in_parallel()) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
}

double block_sum_transform_serial(std::size_t n, const std::function<double(std::size_t)>& f) {
  std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
  for (std::size_t b = 0; b < nblocks; ++b) {
    std::size_t lo = b * kBlock;
    std::size_t hi = std::min(n, lo + kBlock);
    double sum = 0.0, c = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      double y = f(i) - c;
      double t = sum + y;
      c = (t - sum) - y;
      sum = t;
    }
    partial[b] = sum;
  }
  return combine_blocks(partial);
}

double block_sum_transform(std::size_t n, const std::function<double(std::size_t)>& f) {
  if (n == 0) return 0.0;
  std::size_t nblocks = (n + kBlock - 1) / kBlock;
  if (nblocks < 4 || omp_in_parallel()) return block_sum_transform_serial(n, f);
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
    std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    std::size_t hi = std::min(n, lo + kBlock);
    double sum = 0.0, c = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      double y = f(i) - c;
      double t = sum + y;
      c = (t - sum) - y;
      sum = t;
    }
    partial[static_cast<std::size_t>(b)] = sum;
  }
  return combine_blocks(partial);
}

std::vector<double> convolve_direct_serial(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("convolve: empty input");
  std::size_t na = a.size(), nb = b.size();
  std::vector<double> out(na + nb - 1, 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::size_t ilo = k >= nb - 1 ? k - (nb - 1) : 0;
    std::size_t ihi = std::min(k, na - 1);
    double sum = 0.0, c = 0.0;
    for (std::size_t i = ilo; i <= ihi; ++i) {
      double y = a[i] * b[k - i] - c;
      double t = sum + y;
      c = (t - sum) - y;
      sum = t;
    }
    out[k] = sum;
  }
  return out;
}

std::vector<double> convolve_direct(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("convolve: empty input");
  std::size_t na = a.size(), nb = b.size();
  std::vector<double> out(na + nb - 1, 0.0);
  // Each output index is independent, so the parallel result is bitwise equal
  // to the serial one.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ks = 0; ks < static_cast<std::ptrdiff_t>(out.size()); ++ks) {
    std::size_t k = static_cast<std::size_t>(ks);
    std::size_t ilo = k >= nb - 1 ? k - (nb - 1) : 0;
    std::size_t ihi = std::min(k, na - 1);
    double sum = 0.0, c = 0.0;
    for (std::size_t i = ilo; i <= ihi; ++i) {
      double y = a[i] * b[k - i] - c;
      double t = sum + y;
      c = (t - sum) - y;
      sum = t;
    }
    out[k] = sum;
  }
  return out;
}

void fft_radix2(std::vector<double>& re, std::vector<double>& im, bool inverse) {
  std::size_t n = re.size();
  if (n != im.size() || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size must be a power of two");
  // bit reversal
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    double wr = std::cos(ang), wi = std::sin(ang);
    for (std::size_t i = 0; i < n; i += len) {
      double cr = 1.0, ci = 0.0;
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::size_t u = i + k, v = i + k + len / 2;
        double vr = re[v] * cr - im[v] * ci;
        double vi = re[v] * ci + im[v] * cr;
        re[v] = re[u] - vr;
        im[v] = im[u] - vi;
        re[u] += vr;
        im[u] += vi;
        double ncr = cr * wr - ci * wi;
        ci = cr * wi + ci * wr;
        cr = ncr;
      }
    }
  }
  if (inverse) {
    for (std::size_t i = 0; i < n; ++i) {
      re[i] /= static_cast<double>(n);
      im[i] /= static_cast<double>(n);
    }
  }
}

std::vector<double> convolve_fft(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("convolve: empty input");
  std::size_t out_len = a.size() + b.size() - 1;
  std::size_t n = 1;
  while (n < out_len) n <<= 1;
  std::vector<double> re1(n, 0.0), im1(n, 0.0), re2(n, 0.0), im2(n, 0.0);
  std::copy(a.begin(), a.end(), re1.begin());
  std::copy(b.begin(), b.end(), re2.begin());
  fft_radix2(re1, im1, false);
  fft_radix2(re2, im2, false);
  for (std::size_t i = 0; i < n; ++i) {
    double r = re1[i] * re2[i] - im1[i] * im2[i];
    double m = re1[i] * im2[i] + im1[i] * re2[i];
    re1[i] = r;
    im1[i] = m;
  }
  fft_radix2(re1, im1, true);
  re1.resize(out_len);
  return re1;
}

HermiteRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be positive");
  // Jacobi matrix for Hermite polynomials (weight e^{-t^2}): zero diagonal,
  // off-diagonal beta_k = sqrt(k/2); weights are sqrt(pi) * v_0^2.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double beta = std::sqrt(static_cast<double>(k) / 2.0);
    J(k, k - 1) = beta;
    J(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_hermite: eigensolve failed");
  HermiteRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  double sqrt_pi = std::sqrt(std::numbers::pi);
  for (int k = 0; k < n; ++k) {
    rule.nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    double v0 = solver.eigenvectors()(0, k);
    rule.weights[static_cast<std::size_t>(k)] = sqrt_pi * v0 * v0;
  }
  return rule;
}

double Rng::uniform01() {
  std::uint64_t raw = engine_();
  return static_cast<double>(raw >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace epilab::kernels
