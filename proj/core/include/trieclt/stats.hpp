#pragma once

#include <cstddef>
#include <span>

namespace trieclt::mc {

struct SampleMoments {
  std::size_t n = 0;
  double mean = 0;
  double var = 0;  // unbiased
  double skew = 0;
  double exkurt = 0;
  // Standard errors of mean and var from the same sample.
  double se_mean = 0;
  double se_var = 0;
};

SampleMoments sample_moments(std::span<const double> x);
double sample_covariance(std::span<const double> x, std::span<const double> y);
// Standard error of the sample covariance, from the spread of the centred products.
double covariance_se(std::span<const double> x, std::span<const double> y);

double normal_cdf(double z);
// Kolmogorov-Smirnov distance between the sample and the normal law with the sample's mean and
// standard deviation. With lattice > 0 the data live on a lattice of that step and are compared
// with the normal law discretised to the same lattice (continuity correction).
double ks_to_fitted_normal(std::span<const double> x, double lattice = 0);

}  // namespace trieclt::mc
