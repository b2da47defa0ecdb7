#include <cmath>
#include <numeric>
#include <limits>

#include "trieclt/analytics.hpp"
#include "trieclt/error.hpp"

namespace trieclt::analytics {

double entropy(const ProbModel& m) {
  double h = 0;
  for (double p : m.probs()) h -= p * std::log(p);
  return h;
}

cplx rho(const ProbModel& m, cplx s) {
  cplx acc = 0;
  for (double p : m.probs()) acc += std::exp(s * std::log(p));
  return acc;
}

cplx rho_derivative(const ProbModel& m, cplx s) {
  cplx acc = 0;
  for (double p : m.probs()) acc += std::log(p) * std::exp(s * std::log(p));
  return acc;
}

namespace {

using i64 = std::int64_t;

// Continued-fraction recovery of a rational with denominator <= max_den within tol.
std::optional<Rational> recover_rational(double x, i64 max_den, double tol) {
  i64 h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double y = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(y);
    if (a > 1e15) break;
    i64 ai = static_cast<i64>(a);
    i64 h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= tol) return Rational{h1, k1};
    double frac = y - a;
    if (frac == 0) break;
    y = 1 / frac;
  }
  return std::nullopt;
}

// Refines a list of integers > 1 into a pairwise coprime basis; every input factors over it.
std::vector<i64> coprime_basis(std::vector<i64> xs) {
  std::erase_if(xs, [](i64 x) { return x <= 1; });
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (std::size_t i = 0; i < xs.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < xs.size() && !changed; ++j) {
        i64 g = std::gcd(xs[i], xs[j]);
        if (g > 1) {
          i64 a = xs[i] / g, b = xs[j] / g;
          xs.erase(xs.begin() + static_cast<long>(j));
          xs.erase(xs.begin() + static_cast<long>(i));
          for (i64 v : {a, b, g})
            if (v > 1) xs.push_back(v);
          changed = true;
        }
      }
  }
  return xs;
}

std::vector<i64> exponents(i64 x, const std::vector<i64>& basis) {
  std::vector<i64> e(basis.size(), 0);
  for (std::size_t i = 0; i < basis.size(); ++i)
    while (x % basis[i] == 0) {
      x /= basis[i];
      ++e[i];
    }
  if (x != 1) fail(Errc::span_undetermined, "factorisation over the coprime basis failed");
  return e;
}

double span_of_rationals(const std::vector<Rational>& q) {
  std::vector<i64> all;
  for (const auto& r : q) {
    all.push_back(r.num);
    all.push_back(r.den);
  }
  const auto basis = coprime_basis(all);
  // -ln p = sum_i e_i ln b_i, with the ln b_i linearly independent over Q.
  std::vector<std::vector<i64>> vecs;
  for (const auto& r : q) {
    auto d = exponents(r.den, basis), n = exponents(r.num, basis);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= n[i];
    vecs.push_back(std::move(d));
  }
  // Primitive direction of the first vector.
  std::vector<i64> v = vecs[0];
  i64 g = 0;
  for (i64 x : v) g = std::gcd(g, std::abs(x));
  for (i64& x : v) x /= g;
  double len = 0;
  for (std::size_t i = 0; i < v.size(); ++i) len += static_cast<double>(v[i]) * std::log(static_cast<double>(basis[i]));
  if (len < 0) {
    for (i64& x : v) x = -x;
    len = -len;
  }
  i64 cg = 0;
  for (const auto& e : vecs) {
    // e must equal c * v for an integer c.
    i64 c = 0;
    bool set = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == 0) {
        if (e[i] != 0) return 0.0;
        continue;
      }
      if (e[i] % v[i] != 0) return 0.0;
      i64 ci = e[i] / v[i];
      if (set && ci != c) return 0.0;
      c = ci;
      set = true;
    }
    cg = std::gcd(cg, std::abs(c));
  }
  return static_cast<double>(cg) * len;
}

}  // namespace

double span(const ProbModel& m) {
  if (m.declared_span()) return *m.declared_span();
  if (m.rationals()) return span_of_rationals(*m.rationals());
  std::vector<Rational> q;
  for (double p : m.probs()) {
    // A rational that only rounds to p is accepted; looser tolerances admit spurious convergents.
    auto r = recover_rational(p, 1000000, 4 * std::numeric_limits<double>::epsilon());
    if (!r) fail(Errc::span_undetermined,
                 "span cannot be decided from decimal probabilities; give rationals or declare it");
    q.push_back(*r);
  }
  i64 num = 0, den = 1;
  for (const auto& r : q) {
    i64 l = std::lcm(den, r.den);
    num = num * (l / den) + r.num * (l / r.den);
    den = l;
  }
  if (num != den)
    fail(Errc::span_undetermined, "recovered rationals do not sum to 1; declare the span");
  return span_of_rationals(q);
}

}  // namespace trieclt::analytics
