#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/multiprecision/mpfr.hpp>

#include "detail.hpp"
#include "protected_detail.hpp"
#include "trieclt/error.hpp"

namespace trieclt::analytics {

namespace detail {

std::vector<WeightedProb> level_groups(const ProbModel& model, unsigned m) {
  std::map<double, int> letters;
  for (double p : model.probs()) ++letters[p];
  std::vector<std::pair<double, int>> g(letters.rbegin(), letters.rend());
  std::vector<WeightedProb> out;
  std::vector<unsigned> k(g.size(), 0);
  auto rec = [&](auto&& self, std::size_t j, unsigned left, double logp, double logw) -> void {
    if (j + 1 == g.size()) {
      logp += left * std::log(g[j].first);
      logw += left * std::log(static_cast<double>(g[j].second)) - lfactorial(left);
      out.push_back({std::exp(logp), std::exp(logw)});
      return;
    }
    for (unsigned kj = 0; kj <= left; ++kj)
      self(self, j + 1, left - kj, logp + kj * std::log(g[j].first),
           logw + kj * std::log(static_cast<double>(g[j].second)) - lfactorial(kj));
  };
  rec(rec, 0, m, 0.0, lfactorial(m));
  for (auto& w : out) w.count = std::round(w.count);
  return out;
}

double log1p_g(double x) {
  if (x > 1) return x + std::log1p(-x * std::exp(-x));
  return std::log1p(expm1_minus_x(x));
}

namespace {

// log(1 - x e^{-x}) = log1p_g(x) - x.
double log_h(double x) {
  if (x > 1) return std::log1p(-x * std::exp(-x));
  return std::log1p(expm1_minus_x(x)) - x;
}

}  // namespace

double kprot_fE(const std::vector<WeightedProb>& groups, double lambda) {
  if (lambda <= 0) return 0;
  if (lambda > 50) {
    // L - lambda summed directly; L itself would lose the digits that matter here.
    double Lm = 0;
    for (const auto& w : groups) Lm += w.count * log_h(w.p * lambda);
    return std::exp(Lm) - std::exp(-lambda);
  }
  double L = 0;
  for (const auto& w : groups) L += w.count * log1p_g(w.p * lambda);
  if (L > 1) return std::exp(L - lambda) - std::exp(-lambda);
  return std::exp(-lambda) * std::expm1(L);
}

double kprot_fC(const std::vector<WeightedProb>& groups, double lambda) {
  if (lambda <= 0) return 0;
  double Lm = 0, D = 0;
  for (const auto& w : groups) {
    double x = w.p * lambda;
    Lm += w.count * log_h(x);
    // d/dlambda log(e^x - x) - P = P (x - 1) / (e^x - x)
    D += w.count * w.p * (x - 1) / (std::exp(x) - x);
  }
  return lambda * (std::exp(Lm) * D + std::exp(-lambda));
}

Estimate symmetric_protected_mpfr(std::uint64_t R) {
  using boost::multiprecision::mpfr_float;
  if (R == 1) return {1.0, Method::closed_form, 0};
  const double Rd = static_cast<double>(R);
  double max_log = 0;
  for (std::uint64_t j = 2; j <= R; ++j) {
    double jd = static_cast<double>(j);
    double lt = std::lgamma(Rd) - std::lgamma(Rd - jd + 1) - std::log(jd - 1) - jd * std::log(jd);
    max_log = std::max(max_log, lt);
  }
  const unsigned bits = static_cast<unsigned>(max_log / std::numbers::ln2) + 96;
  const unsigned digits10 = static_cast<unsigned>(bits * 0.30103) + 10;
  const unsigned saved = mpfr_float::default_precision();
  mpfr_float::default_precision(digits10);
  mpfr_float sum = 0, a = 1;
  for (std::uint64_t j = 2; j <= R; ++j) {
    a *= static_cast<unsigned long>(R - j + 1);
    mpfr_float jj = static_cast<unsigned long>(j);
    mpfr_float term = a / (static_cast<unsigned long>(j - 1) * pow(jj, static_cast<unsigned long>(j)));
    if (j % 2 == 0) sum += term;
    else sum -= term;
  }
  mpfr_float v = 1 - log(mpfr_float(static_cast<unsigned long>(R))) + sum;
  double out = v.convert_to<double>();
  mpfr_float::default_precision(saved);
  return {out, Method::multiprecision, 1e-16 * std::max(1.0, std::abs(out))};
}

}  // namespace detail

using detail::WeightedProb;

KprotSubsets::KprotSubsets(const ProbModel& model, unsigned k) : k_(k) {
  auto groups = detail::level_groups(model, k - 1);
  double R = 0;
  for (const auto& g : groups) R += g.count;
  if (R > 20)
    fail(Errc::combinatorial_blowup,
         "subset sum over " + std::to_string(static_cast<long long>(R)) +
             " strings of length k-1 is too large; use the symmetric path or quadrature");
  if (groups.size() == 1) {
    const double p = groups[0].p;
    const unsigned Ri = static_cast<unsigned>(R);
    double binom = 1;
    for (unsigned j = 0; j <= Ri; ++j) {
      terms_.push_back({j, j * p, binom * std::pow(p, j)});
      binom = binom * (Ri - j) / (j + 1);
    }
  } else {
    std::vector<double> P;
    for (const auto& g : groups)
      for (int c = 0; c < static_cast<int>(g.count); ++c) P.push_back(g.p);
    const std::size_t n = P.size();
    const std::size_t masks = std::size_t{1} << n;
    std::vector<double> sum(masks, 0), prod(masks, 1);
    std::vector<unsigned> size(masks, 0);
    std::map<std::pair<unsigned, double>, double> agg;
    agg[{0u, 0.0}] = 1;
    for (std::size_t m = 1; m < masks; ++m) {
      std::size_t low = m & (~m + 1);
      std::size_t rest = m ^ low;
      auto bit = static_cast<std::size_t>(__builtin_ctzll(low));
      sum[m] = sum[rest] + P[bit];
      prod[m] = prod[rest] * P[bit];
      size[m] = size[rest] + 1;
      agg[{size[m], sum[m]}] += prod[m];
    }
    for (const auto& [key, pr] : agg) terms_.push_back({key.first, key.second, pr});
  }
  rho_ = [model](cplx s) { return rho(model, s); };
  drho_ = [model](cplx s) { return rho_derivative(model, s); };
  H_ = entropy(model);
}

cplx KprotSubsets::mellin(cplx s) const {
  cplx g = 0;
  for (const auto& t : terms_) {
    if (t.size < 2) continue;
    const double sign = t.size % 2 == 0 ? 1.0 : -1.0;
    g += sign * t.prod * std::exp((-static_cast<double>(t.size) - s) * std::log(t.sum)) *
         gamma(static_cast<double>(t.size) + s);
  }
  const double km1 = k_ - 1.0;
  auto N = [&](cplx z) { return z * std::pow(rho_(-z), km1) + 1.0; };
  auto dN = [&](cplx z) {
    cplx r = rho_(-z);
    return std::pow(r, km1) - z * km1 * std::pow(r, km1 - 1) * drho_(-z);
  };
  cplx ratio = std::abs(s + 1.0) < 1e-4 ? dN((s - 1.0) / 2.0) : N(s) / (s + 1.0);
  return -gamma(s + 2.0) / s * ratio + g;
}

double KprotSubsets::at_minus_one() const {
  double g = 0;
  for (const auto& t : terms_) {
    if (t.size < 2) continue;
    const double sign = t.size % 2 == 0 ? 1.0 : -1.0;
    g += sign * t.prod / std::pow(t.sum, t.size - 1.0) * std::tgamma(t.size - 1.0);
  }
  return 1 - (k_ - 1.0) * H_ + g;
}

double KprotSubsets::an(std::uint64_t n) const {
  if (n == 0) return 0;
  double acc = 0;
  for (const auto& t : terms_) {
    if (t.size > n) continue;
    const double sign = t.size % 2 == 0 ? 1.0 : -1.0;
    double falling = std::exp(detail::lfactorial(static_cast<double>(n)) -
                              detail::lfactorial(static_cast<double>(n - t.size)));
    acc += sign * falling * t.prod * std::pow(std::max(0.0, 1 - t.sum), static_cast<double>(n - t.size));
  }
  return acc;
}

Estimate symmetric_protected_constant(std::uint64_t R) {
  require(R >= 1, "R must be positive");
  if (R <= (std::uint64_t{1} << 14)) return detail::symmetric_protected_mpfr(R);
  if (R > (std::uint64_t{1} << 20))
    fail(Errc::combinatorial_blowup, "symmetric protected constant needs r^(k-1) <= 2^20");
  const double Rd = static_cast<double>(R);
  // (1/R) * integral of e^{-Ry} expm1(R log1p(g(y))) y^{-2} dy, in u = ln y.
  auto integrand = [Rd](double u) {
    double y = std::exp(u);
    if (y == 0 || !std::isfinite(y)) return 0.0;
    double L = Rd * detail::log1p_g(y);
    double x = Rd * y;
    double f = L > 1 ? std::exp(L - x) - std::exp(-x) : std::exp(-x) * std::expm1(L);
    return f / y;
  };
  const double inf = std::numeric_limits<double>::infinity();
  auto lo = integrate(integrand, -inf, 0.0, 1e-13);
  auto hi = integrate(integrand, 0.0, inf, 1e-13);
  return {(lo.value + hi.value) / Rd, Method::quadrature, (lo.error + hi.error) / Rd};
}

Estimate protected_constant(const ProbModel& m, unsigned k) {
  require(k >= 1, "protection level needs k >= 1");
  if (k == 1) return {1.0, Method::closed_form, 0};
  if (m.is_symmetric()) {
    double R = std::pow(static_cast<double>(m.size()), k - 1.0);
    if (R > static_cast<double>(std::uint64_t{1} << 20))
      fail(Errc::combinatorial_blowup, "symmetric protected constant needs r^(k-1) <= 2^20");
    return symmetric_protected_constant(static_cast<std::uint64_t>(R));
  }
  KprotSubsets sub(m, k);
  return {sub.at_minus_one(), Method::closed_form, 1e-13};
}

Estimate protected_constant_subsets(const ProbModel& m, unsigned k) {
  require(k >= 2, "subset formula needs k >= 2");
  KprotSubsets sub(m, k);
  return {sub.at_minus_one(), Method::closed_form, 1e-13};
}

double protected_asymptotic(unsigned r, unsigned k) {
  require(r >= 2 && k >= 2, "asymptotic protected constant needs r, k >= 2");
  return 0.5 * std::pow(static_cast<double>(r), 1.0 - k);
}

Estimate protected_constant_quadrature(const ProbModel& m, unsigned k) {
  require(k >= 1, "protection level needs k >= 1");
  auto groups = detail::level_groups(m, k - 1);
  auto integrand = [&groups](double u) {
    double x = std::exp(u);
    if (x == 0 || !std::isfinite(x)) return 0.0;
    return detail::kprot_fE(groups, x) / x;
  };
  const double inf = std::numeric_limits<double>::infinity();
  auto lo = integrate(integrand, -inf, 0.0, 1e-13);
  auto hi = integrate(integrand, 0.0, inf, 1e-13);
  return {lo.value + hi.value, Method::quadrature, lo.error + hi.error};
}

}  // namespace trieclt::analytics
