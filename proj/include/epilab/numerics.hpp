#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "epilab/dist.hpp"

namespace epilab::numerics {

struct QuadratureResult {
  double value = 0.0;
  double err_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

// Adaptive Simpson on [a,b]. On subdivision exhaustion the partial estimate is
// returned with converged=false and the unresolved error folded into
// err_estimate; callers decide whether that is fatal.
QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              double tol = 1e-10);

// Density sampled on the lattice x_i = x0 + i*dx. Values are stored
// renormalized to unit trapezoid mass; the raw pre-normalization mass is kept
// in `mass` so renormalization is visible, never silent.
struct GridDensity {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> values;
  double mass = 1.0;

  std::size_t size() const { return values.size(); }
  double x(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
};

// Lattice is (i - n/2)*dx so that 0 is always a node; the Laplace kink then
// never falls between samples. n must be a power of two >= 2^12.
GridDensity grid_density(const dist::Distribution1D& d, double half_width_sigmas = 12.0,
                         std::size_t n = std::size_t{1} << 14);

double trapezoid_mass(const GridDensity& f);

// FFT route (default) and the direct O(n^2) serial reference used to certify
// it. Both require equal dx; the output lattice starts at f.x0 + g.x0.
GridDensity convolve(const GridDensity& f, const GridDensity& g);
GridDensity convolve_reference(const GridDensity& f, const GridDensity& g);

// Density of a*X on the exactly scaled lattice (no interpolation). Negative a
// reverses the sample order.
GridDensity scale_density(const GridDensity& f, double a);

double lp_norm(const GridDensity& f, double p);

// Trapezoid integral of -f log f with the pdf floored at 1e-300 inside the
// log and contributions below 1e-30 dropped.
double grid_entropy(const GridDensity& f);

// Tensor-product expectation of g under N(0,sx^2) x N(0,sy^2). Nodes whose
// Hermite weights underflow to zero are skipped. Rows are evaluated in
// parallel but combined serially in index order, so the result is independent
// of the thread count.
double gauss_hermite_expect_2d(const std::function<double(double, double)>& g, double sigma_x,
                               double sigma_y, std::size_t nodes = 96);

}  // namespace epilab::numerics
