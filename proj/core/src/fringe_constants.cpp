#include <cmath>

#include "detail.hpp"
#include "trieclt/error.hpp"
#include "trieclt/string_source.hpp"
#include "trieclt/trie.hpp"

namespace trieclt::analytics {

namespace {

constexpr unsigned kEkRecursionMax = 1000;

using detail::lfactorial;
using detail::po;

double log_binom_pmf(unsigned n, unsigned j, double p) {
  return lfactorial(n) - lfactorial(j) - lfactorial(n - j) + j * std::log(p) +
         (n - j) * std::log1p(-p);
}

double log_pattern_probability(const ProbModel& m, const Trie& t, NodeId v) {
  const auto& node = t.node(v);
  if (node.nu <= 1) return 0;
  if (node.child_count == 0) return -std::numeric_limits<double>::infinity();
  double acc = lfactorial(static_cast<double>(node.nu));
  for (std::uint32_t c = 0; c < node.child_count; ++c) {
    const NodeId w = node.first_child + c;
    const auto& child = t.node(w);
    acc += -lfactorial(static_cast<double>(child.nu)) +
           static_cast<double>(child.nu) * std::log(m.p(child.letter)) +
           log_pattern_probability(m, t, w);
  }
  return acc;
}

double psi_value(const AnalyticToll& at, Psi x, double t) { return psi_eval(at, x, t).value; }

struct FringePsi {
  double Ek, Ck, Vk, Vks;  // fringe-size k
  double Es, Cs, Vs;       // size
};

FringePsi fringe_psis(const ProbModel& m, unsigned k, double t, const EkOptions& opts) {
  const double H = entropy(m);
  auto size = make_analytic(Toll::size(), m);
  FringePsi f{};
  f.Es = psi_value(size, Psi::E, t);
  f.Cs = psi_value(size, Psi::C, t);
  f.Vs = psi_value(size, Psi::V, t);
  if (k == 1) {
    f.Ek = f.Ck = f.Vk = H;
    f.Vks = f.Cs;
    return f;
  }
  auto fk = make_analytic(Toll::fringe_size(k), m);
  f.Ek = psi_value(fk, Psi::E, t);
  f.Ck = psi_value(fk, Psi::C, t);
  f.Vk = psi_value(fk, Psi::V, t);
  const double e_k = expected_internal(m, k, opts).value;
  const double d = span(m);
  if (d == 0) {
    f.Vks = mellin_fV_size_fringe(m, k, -1.0, e_k).real();
  } else {
    PsiFunction psi(
        d, [&m, k, e_k](double l) { return fV_size_fringe(m, k, l, e_k); },
        [&m, k, e_k](cplx s) { return mellin_fV_size_fringe(m, k, s, e_k); }, nullptr);
    f.Vks = psi(t).value;
  }
  return f;
}

}  // namespace

double pattern_probability(const ProbModel& m, const Trie& pattern) {
  if (pattern.empty()) return 0;
  require(pattern.alphabet_size() == m.size(), "pattern alphabet does not match the model");
  require(pattern.bucket_size() == 1, "pattern must be an ordinary trie");
  return std::exp(log_pattern_probability(m, pattern, Trie::root()));
}

Estimate expected_internal(const ProbModel& m, unsigned k, const EkOptions& opts) {
  if (k <= kEkRecursionMax) {
    std::vector<double> E(k + 1, 0.0);
    for (unsigned n = 2; n <= k; ++n) {
      double rhs = 1, stay = 0;
      for (double p : m.probs()) {
        stay += std::pow(p, n);
        for (unsigned j = 2; j < n; ++j) rhs += std::exp(log_binom_pmf(n, j, p)) * E[j];
      }
      E[n] = rhs / (1 - stay);
    }
    return {E[k], Method::closed_form, 1e-13 * E[k]};
  }
  if (opts.mc_trials >= 2) {
    StringSource src(m, opts.seed);
    double s = 0, ss = 0;
    for (std::uint64_t i = 0; i < opts.mc_trials; ++i) {
      double v = static_cast<double>(sample_fixed(k, src.derive(i)).internal_count());
      s += v;
      ss += v * v;
    }
    const double n = static_cast<double>(opts.mc_trials);
    const double mean = s / n;
    const double var = (ss - n * mean * mean) / (n - 1);
    return {mean, Method::monte_carlo, std::sqrt(std::max(0.0, var) / n)};
  }
  fail(Errc::ek_unavailable, "E_k for k = " + std::to_string(k) +
                                 " needs a Monte Carlo budget beyond the exact recursion");
}

double fV_size_fringe(const ProbModel& m, unsigned k, double lambda, double e_k) {
  require(k >= 2, "size/fringe covariance needs k >= 2");
  const double e = po(lambda, k);
  const double w = std::exp(std::log1p(lambda) - lambda);
  if (e == 0 && w == 0) return 0;
  const double F_size = eval_F_sum([](double x) { return gamma_p(2, x); }, m, lambda, 2).value;
  const double F_k = eval_F_sum([k](double x) { return po(x, k); }, m, lambda, k).value;
  return e * (e_k - F_size) + w * (F_k - e);
}

cplx mellin_fV_size_fringe(const ProbModel& m, unsigned k, cplx s, double e_k) {
  require(k >= 2, "size/fringe covariance needs k >= 2");
  const cplx a = double(k) + s + 1.0;
  PrefixSumOptions o;
  o.decay_q = 2;
  auto first = prefix_sum(
      m, [a](double P) { return binom_remainder(a, P) / std::pow(cplx(1 + P), a); }, o);
  o.decay_q = k;
  auto second = prefix_sum(
      m, [a, k](double P) { return (a + P) * std::pow(P, k) / std::pow(cplx(1 + P), a); }, o);
  cplx root_term = (a + 1.0) / std::pow(cplx(2.0), a);
  return gamma(s + double(k)) / std::exp(lfactorial(k)) *
         (e_k - first.value + second.value - root_term);
}

Estimate asym_cov_size_fringe(const ProbModel& m, unsigned k, double t, const EkOptions& opts) {
  require(k >= 2, "size/fringe covariance needs k >= 2");
  const double H = entropy(m);
  auto f = fringe_psis(m, k, t, opts);
  return {f.Vks / H - f.Ck * f.Cs / (H * H), Method::harmonic_sum, 1e-10};
}

Estimate fringe_dist(const ProbModel& m, unsigned k, double n) {
  require(k >= 1, "fringe size must be positive");
  const double H = entropy(m);
  const double d = span(m);
  if (d == 0) {
    double v = k == 1 ? H / (1 + H) : 1.0 / ((1 + H) * k * (k - 1.0));
    return {v, Method::closed_form, 0};
  }
  require(n > 0, "periodic models need n for the fringe distribution");
  const double t = std::log(n);
  auto size = make_analytic(Toll::size(), m);
  auto es = psi_eval(size, Psi::E, t);
  double ek = H, err = es.error;
  if (k >= 2) {
    auto e = psi_eval(make_analytic(Toll::fringe_size(k), m), Psi::E, t);
    ek = e.value;
    err += e.error;
  }
  return {ek / (es.value + H), Method::harmonic_sum, err};
}

Estimate fringe_dist(const ProbModel& m, const Trie& pattern, double n) {
  require(!pattern.empty(), "pattern must be nonempty");
  if (pattern.is_bullet()) return fringe_dist(m, 1u, n);
  auto e = fringe_dist(m, static_cast<unsigned>(pattern.string_count()), n);
  const double p = pattern_probability(m, pattern);
  return {p * e.value, e.method, p * e.error};
}

Estimate fringe_fluct_var(const ProbModel& m, unsigned k, double n, const EkOptions& opts) {
  require(k >= 1, "fringe size must be positive");
  require(n > 0, "n must be positive");
  const double H = entropy(m);
  auto f = fringe_psis(m, k, std::log(n), opts);
  const double z = f.Es + H;
  const double r = f.Ek / z;
  double v = H / (z * z) * (f.Vk - 2 * r * f.Vks + r * r * f.Vs);
  double c = z * f.Ck - f.Ek * f.Cs;
  v -= c * c / (z * z * z * z);
  return {v, span(m) == 0 ? Method::closed_form : Method::harmonic_sum, 1e-10};
}

Estimate bucket_constants(const ProbModel& m, unsigned b, unsigned k) {
  require(b >= 1, "bucket size must be positive");
  if (k == 0) return {1.0 / b, Method::closed_form, 0};
  require(k <= b, "bucket occupancy needs k <= b");
  double head;
  if (k == 1)
    head = entropy(m);
  else
    head = (1 - rho(m, k).real()) / (k * (k - 1.0));
  double tail = 0;
  for (unsigned i = 1; i + k <= b; ++i)
    for (double p : m.probs())
      tail += std::exp(k * std::log(p) + i * std::log1p(-p) + std::lgamma(k - 1.0 + i) -
                       lfactorial(k) - lfactorial(i));
  return {head - tail, Method::closed_form, 0};
}

Estimate bucket_constant_quadrature(const ProbModel& m, unsigned b, unsigned k) {
  require(b >= 1, "bucket size must be positive");
  std::function<double(double)> f;
  if (k == 0) {
    f = [b](double x) { return gamma_p(b + 1, x); };
  } else {
    auto at = make_analytic(Toll::bucket_occupancy(b, k), m);
    f = at.fE;
  }
  auto e = mellin_numeric(f, -1.0);
  return {e.value.real(), Method::quadrature, e.error};
}

}  // namespace trieclt::analytics
