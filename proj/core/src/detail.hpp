#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "trieclt/analytics.hpp"

namespace trieclt::analytics::detail {

// Poisson probability P(Po(mu) = k).
inline double po(double mu, unsigned k) {
  if (mu <= 0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(mu) - mu - std::lgamma(k + 1.0));
}

inline double lfactorial(double n) { return std::lgamma(n + 1.0); }

struct WeightedProb {
  double p;      // P(beta)
  double count;  // number of strings beta of this length sharing it
};

// Distinct values of P(beta) over |beta| = m with their multiplicities.
std::vector<WeightedProb> level_groups(const ProbModel& model, unsigned m);

// log(1 - x e^{-x}) + x, i.e. log1p(e^x - 1 - x), stable for all x >= 0.
double log1p_g(double x);

// fE for k-protected nodes from the level groups of A^{k-1}.
double kprot_fE(const std::vector<WeightedProb>& groups, double lambda);
double kprot_fC(const std::vector<WeightedProb>& groups, double lambda);

// MfE_{2prot,R}(-1) by multiprecision evaluation of the alternating sum.
Estimate symmetric_protected_mpfr(std::uint64_t R);

}  // namespace trieclt::analytics::detail
