#pragma once

#include <functional>
#include <vector>

#include "trieclt/analytics.hpp"

namespace trieclt::analytics {

// Inclusion-exclusion data over subsets S of A^{k-1}, aggregated by (|S|, sum of P).
class KprotSubsets {
 public:
  KprotSubsets(const ProbModel& model, unsigned k);

  cplx mellin(cplx s) const;
  double at_minus_one() const;
  // E phi(T_n).
  double an(std::uint64_t n) const;

 private:
  struct Term {
    unsigned size;
    double sum;
    double prod;  // sum over the aggregated subsets of prod P
  };
  unsigned k_;
  std::vector<Term> terms_;
  std::function<cplx(cplx)> rho_;
  std::function<cplx(cplx)> drho_;
  double H_ = 0;
};

Estimate protected_constant_subsets(const ProbModel& m, unsigned k);

}  // namespace trieclt::analytics
