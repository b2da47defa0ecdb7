#include "trieclt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "trieclt/error.hpp"

namespace trieclt::mc {

SampleMoments sample_moments(std::span<const double> x) {
  require(x.size() >= 2, "moments need at least two observations");
  SampleMoments m;
  m.n = x.size();
  const double n = static_cast<double>(m.n);
  double s = 0;
  for (double v : x) s += v;
  m.mean = s / n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : x) {
    double d = v - m.mean;
    double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.var = m2 * n / (n - 1);
  m.se_mean = std::sqrt(m.var / n);
  m.se_var = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
  if (m2 > 0) {
    m.skew = m3 / std::pow(m2, 1.5);
    m.exkurt = m4 / (m2 * m2) - 3;
  }
  return m;
}

double sample_covariance(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "covariance needs paired samples");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double c = 0;
  for (std::size_t i = 0; i < x.size(); ++i) c += (x[i] - mx) * (y[i] - my);
  return c / (n - 1);
}

double covariance_se(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "covariance needs paired samples");
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = (x[i] - mx) * (y[i] - my);
  return sample_moments(prod).se_mean;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double ks_to_fitted_normal(std::span<const double> x, double lattice) {
  auto m = sample_moments(x);
  if (m.var <= 0) return 1;
  const double sd = std::sqrt(m.var);
  std::vector<double> z(x.begin(), x.end());
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0;
  if (lattice > 0) {
    for (std::size_t i = 0; i < z.size();) {
      std::size_t j = i;
      while (j < z.size() && z[j] == z[i]) ++j;
      double below = normal_cdf((z[i] - lattice / 2 - m.mean) / sd);
      double upto = normal_cdf((z[i] + lattice / 2 - m.mean) / sd);
      d = std::max({d, std::abs(static_cast<double>(i) / n - below),
                    std::abs(static_cast<double>(j) / n - upto)});
      i = j;
    }
    return d;
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    double f = normal_cdf((z[i] - m.mean) / sd);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

}  // namespace trieclt::mc
