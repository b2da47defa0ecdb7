#include <algorithm>
#include <cmath>
#include <map>

#include "trieclt/error.hpp"
#include "trieclt/numeric.hpp"

namespace trieclt::analytics {

namespace {

struct Group {
  double c;      // letter probability
  double log_c;
  double log_g;  // log of the number of letters sharing it
};

std::vector<Group> groups_of(const ProbModel& m) {
  std::map<double, int> count;
  for (double p : m.probs()) ++count[p];
  std::vector<Group> g;
  for (auto [p, n] : count) g.push_back({p, std::log(p), std::log(static_cast<double>(n))});
  // Largest probability first so the enumeration order is stable.
  std::reverse(g.begin(), g.end());
  return g;
}

// Visits every composition (k_1..k_J) of m, calling fn(logP, logWeight).
template <class Fn>
void for_each_level(const std::vector<Group>& g, std::size_t m, const std::vector<double>& lfact,
                    Fn&& fn) {
  const std::size_t J = g.size();
  std::vector<std::size_t> k(J, 0);
  auto rec = [&](auto&& self, std::size_t j, std::size_t left, double logp, double logw) -> void {
    if (j + 1 == J) {
      k[j] = left;
      fn(logp + left * g[j].log_c, logw - lfact[left] + left * g[j].log_g);
      return;
    }
    for (std::size_t kj = 0; kj <= left; ++kj) {
      k[j] = kj;
      self(self, j + 1, left - kj, logp + kj * g[j].log_c, logw - lfact[kj] + kj * g[j].log_g);
    }
  };
  rec(rec, 0, m, 0.0, lfact[m]);
}

}  // namespace

ComplexEstimate prefix_sum(const ProbModel& model, const std::function<cplx(double)>& g,
                           const PrefixSumOptions& opts) {
  const auto groups = groups_of(model);
  double rho_q = 0;
  for (double p : model.probs()) rho_q += std::pow(p, opts.decay_q);
  require(rho_q < 1, "prefix sums need decay exponent q with rho(q) < 1");
  const double log_pmax = std::log(model.pmax());
  std::vector<double> lfact{0.0};
  cplx sum = 0;
  double tail = INFINITY;
  for (std::size_t m = 0; m <= opts.max_depth; ++m) {
    if (m > 0) lfact.push_back(lfact.back() + std::log(static_cast<double>(m)));
    const double mult = (opts.star && m > 0) ? 2.0 : 1.0;
    double c_level = 0;
    cplx level = 0;
    for_each_level(groups, m, lfact, [&](double logp, double logw) {
      double p = std::exp(logp);
      cplx v = g(p);
      level += std::exp(logw) * v;
      if (p > 0) c_level = std::max(c_level, std::abs(v) * std::exp(-opts.decay_q * logp));
    });
    sum += mult * level;
    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()))
      throw NumericError(Errc::truncation_not_converged, "prefix sum overflowed", INFINITY);
    const bool asymptotic = opts.scale * std::exp(m * log_pmax) <= 1e-3;
    if (asymptotic) {
      tail = (opts.star ? 2.0 : 1.0) * c_level * std::pow(rho_q, static_cast<double>(m + 1)) /
             (1 - rho_q);
      if (tail <= std::max(opts.abs_tol, opts.rel_tol * std::abs(sum)) || tail == 0)
        return {sum, Method::series, tail};
    }
  }
  throw NumericError(Errc::truncation_not_converged,
                     "prefix sum tail bound " + std::to_string(tail) + " above tolerance", tail);
}

Estimate prefix_sum_real(const ProbModel& model, const std::function<double(double)>& g,
                         const PrefixSumOptions& opts) {
  auto r = prefix_sum(model, [&g](double p) { return cplx(g(p), 0.0); }, opts);
  return {r.value.real(), r.method, r.error};
}

}  // namespace trieclt::analytics
