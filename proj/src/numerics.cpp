#include "epilab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "epilab/kernels.hpp"

namespace epilab::numerics {

namespace {

constexpr std::size_t kMaxEvals = 20'000'000;

struct SimpsonState {
  const std::function<double(double)>& f;
  std::size_t evals = 0;
  double err = 0.0;
  bool converged = true;
};

double simpson_rec(SimpsonState& st, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = st.f(lm);
  double frm = st.f(rm);
  st.evals += 2;
  double h6 = (b - a) / 12.0;
  double left = h6 * (fa + 4.0 * flm + fm);
  double right = h6 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  bool budget_out = depth <= 0 || st.evals > kMaxEvals;
  if (std::abs(delta) <= 15.0 * tol || budget_out) {
    if (budget_out && std::abs(delta) > 15.0 * tol) st.converged = false;
    st.err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_rec(st, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(st, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              double tol) {
  if (!(a < b)) throw std::domain_error("integrate_1d: requires a < b");
  if (!(tol > 0.0)) throw std::domain_error("integrate_1d: requires tol > 0");
  double m = 0.5 * (a + b);
  double fa = f(a);
  double fm = f(m);
  double fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  SimpsonState st{f, 3, 0.0, true};
  double value = simpson_rec(st, a, m, b, fa, fm, fb, whole, tol, 48);
  return {value, st.err, st.evals, st.converged};
}

namespace {

void renormalize(GridDensity& g) {
  double raw = trapezoid_mass(g);
  if (!(raw > 0.0)) throw std::runtime_error("grid density has nonpositive mass");
  g.mass = raw;
  double inv = 1.0 / raw;
  kernels::parallel_fill(g.values, [&](std::size_t i) { return g.values[i] * inv; });
}

}  // namespace

double trapezoid_mass(const GridDensity& f) {
  std::size_t n = f.values.size();
  double s = kernels::block_sum(f.values.data(), n);
  s -= 0.5 * (f.values.front() + f.values[n - 1]);
  return s * f.dx;
}

GridDensity grid_density(const dist::Distribution1D& d, double half_width_sigmas, std::size_t n) {
  if (n < (std::size_t{1} << 12) || (n & (n - 1)) != 0)
    throw std::domain_error("grid_density: n must be a power of two >= 4096");
  if (!(half_width_sigmas > 0.0)) throw std::domain_error("grid_density: half width must be positive");
  GridDensity g;
  double half = half_width_sigmas * d.sigma();
  double h = static_cast<double>(n / 2);
  g.dx = half / h;
  g.x0 = -h * g.dx;
  g.values.resize(n);
  kernels::parallel_fill(g.values, [&](std::size_t i) { return d.pdf(g.x(i)); });
  double raw = trapezoid_mass(g);
  if (raw < 1.0 - 1e-9)
    throw std::runtime_error("grid_density: span too small, tail mass " + std::to_string(1.0 - raw));
  if (raw > 1.0 + 1e-3) throw std::runtime_error("grid_density: mass exceeds 1 beyond tolerance");
  renormalize(g);
  return g;
}

namespace {

void check_compatible(const GridDensity& f, const GridDensity& g) {
  if (f.values.size() < 2 || g.values.size() < 2)
    throw std::domain_error("convolve: grids too short");
  if (std::abs(f.dx - g.dx) > 1e-12 * f.dx)
    throw std::domain_error("convolve: grid spacings differ");
}

GridDensity finalize_convolution(const GridDensity& f, const GridDensity& g,
                                 std::vector<double> vals) {
  GridDensity out;
  out.dx = f.dx;
  out.x0 = f.x0 + g.x0;
  for (double& v : vals) {
    v *= f.dx;
    if (v < 0.0) v = 0.0;
  }
  out.values = std::move(vals);
  double raw = trapezoid_mass(out);
  if (std::abs(raw - 1.0) > 1e-6)
    throw std::runtime_error("convolve: mass not preserved, got " + std::to_string(raw));
  renormalize(out);
  return out;
}

}  // namespace

GridDensity convolve(const GridDensity& f, const GridDensity& g) {
  check_compatible(f, g);
  return finalize_convolution(f, g, kernels::convolve_fft(f.values, g.values));
}

GridDensity convolve_reference(const GridDensity& f, const GridDensity& g) {
  check_compatible(f, g);
  return finalize_convolution(f, g, kernels::convolve_direct_serial(f.values, g.values));
}

GridDensity scale_density(const GridDensity& f, double a) {
  if (a == 0.0) throw std::domain_error("scale_density: a = 0 is degenerate");
  GridDensity out;
  std::size_t n = f.values.size();
  double mag = std::abs(a);
  out.dx = mag * f.dx;
  out.values.resize(n);
  if (a > 0.0) {
    out.x0 = a * f.x0;
    kernels::parallel_fill(out.values, [&](std::size_t i) { return f.values[i] / mag; });
  } else {
    out.x0 = a * f.x(n - 1);
    kernels::parallel_fill(out.values, [&](std::size_t i) { return f.values[n - 1 - i] / mag; });
  }
  renormalize(out);
  return out;
}

double lp_norm(const GridDensity& f, double p) {
  if (!(p > 0.0)) throw std::domain_error("lp_norm: p must be positive");
  std::size_t n = f.values.size();
  double s = kernels::block_sum_transform(n, [&](std::size_t i) { return std::pow(f.values[i], p); });
  s -= 0.5 * (std::pow(f.values.front(), p) + std::pow(f.values[n - 1], p));
  return std::pow(s * f.dx, 1.0 / p);
}

double grid_entropy(const GridDensity& f) {
  std::size_t n = f.values.size();
  auto term = [&](std::size_t i) {
    double v = f.values[i];
    if (v < 1e-30) return 0.0;
    return -v * std::log(std::max(v, 1e-300));
  };
  double s = kernels::block_sum_transform(n, term);
  s -= 0.5 * (term(0) + term(n - 1));
  return s * f.dx;
}

double gauss_hermite_expect_2d(const std::function<double(double, double)>& g, double sigma_x,
                               double sigma_y, std::size_t nodes) {
  if (nodes < 32) throw std::domain_error("gauss_hermite_expect_2d: at least 32 nodes per axis");
  if (!(sigma_x > 0.0 && sigma_y > 0.0))
    throw std::domain_error("gauss_hermite_expect_2d: sigmas must be positive");
  kernels::HermiteRule rule = kernels::gauss_hermite(static_cast<int>(nodes));
  std::size_t m = rule.nodes.size();
  std::vector<double> xs(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    xs[i] = std::numbers::sqrt2 * sigma_x * rule.nodes[i];
    ys[i] = std::numbers::sqrt2 * sigma_y * rule.nodes[i];
  }
  std::vector<double> rows(m, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(m); ++ii) {
    std::size_t i = static_cast<std::size_t>(ii);
    if (rule.weights[i] == 0.0) continue;
    double acc = 0.0, comp = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (rule.weights[j] == 0.0) continue;
      double t = rule.weights[j] * g(xs[i], ys[j]);
      double y = t - comp;
      double s = acc + y;
      comp = (s - acc) - y;
      acc = s;
    }
    rows[i] = rule.weights[i] * acc;
  }
  double total = kernels::kahan_sum(rows.data(), rows.size());
  return total / std::numbers::pi;
}

}  // namespace epilab::numerics
