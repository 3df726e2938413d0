#pragma once
// Zero-mean parametric distributions on the real line. Every family exposes
// both tails explicitly (cdf for the lower, sf for the upper) so that
// compositions like quantile(cdf(x)) never lose precision to 1 - u rounding.

#include <cstdint>
#include <string>
#include <vector>

namespace epilab::dist {

enum class Family { gaussian, gaussian_mixture, laplace, logistic };

// Standard-normal helpers shared by transports and tests.
double std_normal_pdf(double x);
double std_normal_logpdf(double x);
double std_normal_cdf(double x);
double std_normal_sf(double x);
double std_normal_log_sf(double x);
double std_normal_quantile(double u);
double std_normal_isf(double s);

struct MixtureComponent {
  double weight;
  double location;   // after recentering
  double sigma;
};

class Distribution1D {
 public:
  static Distribution1D gaussian(double variance);
  static Distribution1D laplace(double scale);
  static Distribution1D logistic(double scale);
  // Weights are normalized and locations recentered so the mean is exactly 0.
  static Distribution1D gaussian_mixture(const std::vector<double>& weights,
                                         const std::vector<double>& locations,
                                         const std::vector<double>& sigmas);

  Family family() const { return family_; }
  double pdf(double x) const;
  double logpdf(double x) const;
  double cdf(double x) const;
  double sf(double x) const;
  double log_sf(double x) const;
  double log_cdf(double x) const;
  double quantile(double u) const;
  double isf(double s) const;          // inverse survival, exact in the far tail
  double power() const;                // E{X^2}
  double sigma() const;                // sqrt(power)
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;
  std::string describe() const;

  // family parameters (meaning depends on family)
  double scale() const { return scale_; }
  const std::vector<MixtureComponent>& components() const { return components_; }

 private:
  Distribution1D(Family f, double scale) : family_(f), scale_(scale) {}
  double mixture_cdf_or_sf(double x, bool upper) const;
  double mixture_log_tail(double x, bool upper) const;
  double mixture_solve(double target_log, bool upper) const;

  Family family_;
  double scale_;                        // variance | b | s
  std::vector<MixtureComponent> components_;
};

}  // namespace epilab::dist
