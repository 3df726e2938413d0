#pragma once
// Low-level parallel kernels. Every parallel routine here has a serial twin
// and produces bit-identical results for any thread count: work is cut into
// fixed-size blocks, each block is summed serially (Kahan), and the block
// partials are combined in index order.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace epilab::kernels {

inline constexpr std::size_t kBlock = 4096;

// Compensated serial sum of a range.
double kahan_sum(const double* data, std::size_t n);

// Fixed-block deterministic sum, parallel over blocks.
double block_sum(const double* data, std::size_t n);
double block_sum_serial(const double* data, std::size_t n);

// Fill out[i] = f(i) for i in [0, n); parallel, order-independent.
void parallel_fill(std::vector<double>& out, const std::function<double(std::size_t)>& f);

// Deterministic sum of f(i) over [0, n) without materializing the values.
double block_sum_transform(std::size_t n, const std::function<double(std::size_t)>& f);
double block_sum_transform_serial(std::size_t n, const std::function<double(std::size_t)>& f);

// Linear convolution, out[k] = sum_i a[i] * b[k - i], length na + nb - 1.
std::vector<double> convolve_direct_serial(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> convolve_direct(const std::vector<double>& a, const std::vector<double>& b);
// Radix-2 FFT route; identical output up to round-off, used by the grid pipeline.
std::vector<double> convolve_fft(const std::vector<double>& a, const std::vector<double>& b);

// In-place iterative radix-2 FFT on interleaved complex data (size a power of two).
void fft_radix2(std::vector<double>& re, std::vector<double>& im, bool inverse);

// Gauss-Hermite rule for weight e^{-t^2}: nodes t_k and weights w_k,
// sum_k w_k g(t_k) ~ integral g(t) e^{-t^2} dt. Golub-Welsch via Eigen.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
HermiteRule gauss_hermite(int n);

// Deterministic portable RNG: the mt19937_64 engine is pinned by the standard;
// only the mappings to uniform/normal are ours (std distributions are
// implementation-defined and would break cross-platform determinism).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform01();          // in (0, 1)
  double normal();             // standard normal, Box-Muller
 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace epilab::kernels
