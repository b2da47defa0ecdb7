#include "trieclt/prob_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trieclt/error.hpp"

namespace trieclt {

ProbModel::ProbModel(std::vector<double> probs, std::optional<double> declared_span,
                     std::string label)
    : probs_(std::move(probs)), declared_span_(declared_span), label_(std::move(label)) {
  require(probs_.size() >= 2, "ProbModel needs at least two letters");
  require(probs_.size() <= 65535, "ProbModel alphabet too large");
  double total = 0;
  for (double p : probs_) {
    require(std::isfinite(p) && p > 0 && p < 1, "letter probabilities must lie in (0,1)");
    total += p;
  }
  require(std::abs(total - 1.0) <= 1e-12, "letter probabilities must sum to 1");
  if (declared_span_) require(*declared_span_ >= 0, "declared span must be nonnegative");
  auto [lo, hi] = std::minmax_element(probs_.begin(), probs_.end());
  pmin_ = *lo;
  pmax_ = *hi;
}

ProbModel ProbModel::from_rationals(std::vector<Rational> probs,
                                    std::optional<double> declared_span, std::string label) {
  require(probs.size() >= 2, "ProbModel needs at least two letters");
  // Exact sum check over a common denominator, reduced stepwise to avoid overflow.
  std::int64_t num = 0, den = 1;
  for (auto& q : probs) {
    require(q.den > 0 && q.num > 0 && q.num < q.den, "rational probabilities must lie in (0,1)");
    std::int64_t g = std::gcd(q.num, q.den);
    q.num /= g;
    q.den /= g;
    std::int64_t l = std::lcm(den, q.den);
    num = num * (l / den) + q.num * (l / q.den);
    den = l;
    std::int64_t h = std::gcd(num, den);
    num /= h;
    den /= h;
  }
  require(num == 1 && den == 1, "rational probabilities must sum to exactly 1");
  std::vector<double> p;
  p.reserve(probs.size());
  for (const auto& q : probs) p.push_back(q.value());
  // Renormalise so the doubles agree with the exact sum as closely as possible.
  double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  ProbModel m(std::move(p), declared_span, std::move(label));
  m.rationals_ = std::move(probs);
  return m;
}

ProbModel ProbModel::symmetric(std::size_t r) {
  require(r >= 2, "symmetric model needs r >= 2");
  std::vector<Rational> q(r, Rational{1, static_cast<std::int64_t>(r)});
  return from_rationals(std::move(q), std::nullopt, "sym" + std::to_string(r));
}

double ProbModel::path_probability(std::span<const Letter> path) const {
  double logp = 0;
  for (Letter a : path) logp += std::log(p(a));
  return std::exp(logp);
}

}  // namespace trieclt
