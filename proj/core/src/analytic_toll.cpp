#include <cmath>
#include <limits>

#include "detail.hpp"
#include "protected_detail.hpp"
#include "trieclt/error.hpp"

namespace trieclt::analytics {

namespace {

using detail::po;

constexpr double kInf = std::numeric_limits<double>::infinity();

Estimate star_sum(const ProbModel& m, const std::function<double(double)>& g, double q,
                  double scale) {
  PrefixSumOptions o;
  o.decay_q = q;
  o.scale = std::max(1.0, scale);
  o.star = true;
  return prefix_sum_real(m, g, o);
}

ComplexEstimate star_sum_c(const ProbModel& m, const std::function<cplx(double)>& g, double q) {
  PrefixSumOptions o;
  o.decay_q = q;
  o.star = true;
  return prefix_sum(m, g, o);
}

double factorial(unsigned k) { return std::exp(detail::lfactorial(k)); }

// (rho(-s) - rho(1)) / (s + 1), continued through s = -1.
cplx q_ratio(const ProbModel& m, cplx s) {
  if (std::abs(s + 1.0) < 1e-4) return -rho_derivative(m, -(s - 1.0) / 2.0);
  return (rho(m, -s) - 1.0) / (s + 1.0);
}

AnalyticToll blank(const Toll& t, const ProbModel& m) {
  AnalyticToll a{t, m};
  a.chi = 0;
  return a;
}

AnalyticToll zero_forms(const Toll& t, const ProbModel& m) {
  AnalyticToll a = blank(t, m);
  a.fE = [](double) { return 0.0; };
  a.fC = [](double) { return 0.0; };
  a.fV = [](double) { return Estimate{}; };
  a.MfE = [](cplx) { return cplx(0); };
  a.MfV = [](cplx) { return ComplexEstimate{}; };
  a.cov_kernel = [](double, double) { return 0.0; };
  a.series_an = [](std::uint64_t) { return 0.0; };
  a.mfe_at_minus_one = [] { return Estimate{}; };
  a.strip = {-kInf, kInf};
  return a;
}

void complete(AnalyticToll& a);

// Adds chi * phi_0 to a toll whose forms were built for chi = 0.
AnalyticToll with_chi(AnalyticToll base, double chi) {
  complete(base);
  if (chi == 0) return base;
  if (base.fV && base.fC) {
    auto fV = base.fV;
    auto fC = base.fC;
    base.fV = [fV, fC, chi](double l) {
      auto e = fV(l);
      e.value += 2 * chi * fC(l);
      return e;
    };
  }
  if (base.MfV && base.MfE) {
    auto MfV = base.MfV;
    auto MfE = base.MfE;
    base.MfV = [MfV, MfE, chi](cplx s) {
      auto e = MfV(s);
      e.value -= 2.0 * chi * s * MfE(s);
      return e;
    };
  }
  if (base.series_an) {
    auto an = base.series_an;
    base.series_an = [an, chi](std::uint64_t n) { return an(n) + (n == 1 ? chi : 0.0); };
  }
  return base;
}

// Removes the chi correction again, giving the forms of phi - chi phi_0.
AnalyticToll shifted(AnalyticToll a) {
  const double chi = a.chi;
  a = with_chi(std::move(a), -chi);
  a.chi = 0;
  return a;
}

AnalyticToll size_forms(const Toll& t, const ProbModel& m) {
  AnalyticToll a = blank(t, m);
  a.fE = [](double l) { return gamma_p(2, l); };
  a.fC = [](double l) { return l * l * std::exp(-l); };
  a.MfE = [](cplx s) { return -gamma(s + 2.0) / s; };
  a.mfe_at_minus_one = [] { return Estimate{1.0, Method::closed_form, 0}; };
  a.cov_kernel = [](double l, double P) {
    return std::exp(std::log1p(l) - l) * gamma_p(2, P * l);
  };
  a.fV = [m](double l) {
    const double w = std::exp(std::log1p(l) - l);
    if (w == 0) return Estimate{0, Method::harmonic_sum, 0};
    auto e = star_sum(m, [l](double P) { return gamma_p(2, P * l); }, 2, l);
    return Estimate{w * e.value, Method::harmonic_sum, w * e.error};
  };
  a.MfV = [m](cplx s) {
    auto sum = star_sum_c(
        m,
        [s](double P) {
          return (binom_remainder(s + 2.0, P) - P * P) / std::pow(cplx(1 + P), s + 2.0);
        },
        2);
    return ComplexEstimate{gamma(s + 2.0) / s * sum.value, Method::harmonic_sum, sum.error};
  };
  a.series_an = [](std::uint64_t n) { return n >= 2 ? 1.0 : 0.0; };
  a.strip = {-2, 0};
  a.decay_q = 2;
  return a;
}

AnalyticToll exact_count_forms(const Toll& t, const ProbModel& m, unsigned k, double pT) {
  // pT * 1{N = k}-type tolls: fringe size k (pT = 1) and fringe match.
  AnalyticToll a = blank(t, m);
  const double kf = factorial(k);
  const double rk = rho(m, k).real();
  a.fE = [k, pT](double l) { return pT * po(l, k); };
  a.fC = [k, pT](double l) { return pT * (k - l) * po(l, k); };
  a.MfE = [k, kf, pT](cplx s) { return pT * gamma(s + double(k)) / kf; };
  a.mfe_at_minus_one = [k, pT] { return Estimate{pT / (k * (k - 1.0)), Method::closed_form, 0}; };
  const bool is_size_k = t.kind() == TollKind::fringe_size;
  a.cov_kernel = [k, pT, is_size_k](double l, double P) {
    double e = pT * po(l, k);
    double joint = is_size_k ? e * std::pow(P, k) : (P == 1.0 ? e : 0.0);
    return joint - e * pT * po(P * l, k);
  };
  a.fV = [m, k, pT, rk, is_size_k](double l) {
    const double e = po(l, k);
    if (e == 0) return Estimate{0, Method::harmonic_sum, 0};
    auto sum = star_sum(m, [l, k](double P) { return po(P * l, k); }, k, l);
    double first = is_size_k ? e * (1 + rk) / (1 - rk) : pT * e;
    return Estimate{first - pT * pT * e * sum.value, Method::harmonic_sum, pT * pT * e * sum.error};
  };
  a.MfV = [m, k, kf, pT, rk, is_size_k](cplx s) {
    auto sum = star_sum_c(
        m, [s, k](double P) { return std::pow(P, k) / std::pow(cplx(1 + P), s + 2.0 * k); }, k);
    cplx first = gamma(s + double(k)) / kf * (is_size_k ? (1 + rk) / (1 - rk) : pT);
    cplx c = pT * pT * gamma(s + 2.0 * k) / (kf * kf);
    return ComplexEstimate{first - c * sum.value, Method::harmonic_sum, std::abs(c) * sum.error};
  };
  a.series_an = [k, pT](std::uint64_t n) { return n == k ? pT : 0.0; };
  a.strip = {-double(k), kInf};
  a.decay_q = k;
  return a;
}

AnalyticToll fringe_ge_forms(const Toll& t, const ProbModel& m, unsigned k) {
  AnalyticToll a = blank(t, m);
  const double km1f = factorial(k - 1);
  a.fE = [k](double l) { return gamma_p(k, l); };
  a.fC = [k](double l) { return k * po(l, k); };
  a.MfE = [k, km1f](cplx s) { return -gamma(s + double(k)) / (km1f * s); };
  a.mfe_at_minus_one = [k] { return Estimate{1.0 / (k - 1.0), Method::closed_form, 0}; };
  a.cov_kernel = [k](double l, double P) { return (1 - gamma_p(k, l)) * gamma_p(k, P * l); };
  a.fV = [m, k](double l) {
    const double w = 1 - gamma_p(k, l);
    if (w == 0) return Estimate{0, Method::harmonic_sum, 0};
    auto e = star_sum(m, [l, k](double P) { return gamma_p(k, P * l); }, k, l);
    return Estimate{w * e.value, Method::harmonic_sum, w * e.error};
  };
  a.series_an = [k](std::uint64_t n) { return n >= k ? 1.0 : 0.0; };
  a.strip = {-double(k), 0};
  a.decay_q = k;
  return a;
}

AnalyticToll kprot_forms(const Toll& t, const ProbModel& m, unsigned k) {
  AnalyticToll a = blank(t, m);
  auto groups = detail::level_groups(m, k - 1);
  a.fE = [groups](double l) { return detail::kprot_fE(groups, l); };
  a.fC = [groups](double l) { return detail::kprot_fC(groups, l); };
  double R = 0;
  for (const auto& g : groups) R += g.count;
  if (R <= 20) {
    auto sub = std::make_shared<KprotSubsets>(m, k);
    a.MfE = [sub](cplx s) { return sub->mellin(s); };
    a.series_an = [sub](std::uint64_t n) { return sub->an(n); };
  }
  a.mfe_at_minus_one = [m, k] { return protected_constant(m, k); };
  a.strip = {-2, 0};
  a.decay_q = 2;
  return a;
}

AnalyticToll bucket_forms(const Toll& t, const ProbModel& m, unsigned b, unsigned k) {
  require(k >= 1 && k <= b, "bucket occupancy needs 1 <= k <= b");
  AnalyticToll a = blank(t, m);
  const double kf = factorial(k);
  a.fE = [m, b, k](double l) {
    double acc = 0;
    for (double p : m.probs()) acc += gamma_p(b - k + 1, (1 - p) * l) * po(p * l, k);
    return acc;
  };
  a.fC = [m, b, k](double l) {
    double acc = 0;
    for (double p : m.probs()) {
      const double q = 1 - p;
      double dk = po(p * l, k - 1) - po(p * l, k);
      acc += q * po(q * l, b - k) * po(p * l, k) + gamma_p(b - k + 1, q * l) * p * dk;
    }
    return l * acc;
  };
  a.MfE = [m, b, k, kf](cplx s) {
    cplx head;
    if (k == 1)
      head = q_ratio(m, s) * gamma(s + 2.0);
    else
      head = (rho(m, -s) - rho(m, k)) * gamma(s + double(k)) / kf;
    cplx tail = 0;
    for (unsigned i = 1; i + k <= b; ++i)
      for (double p : m.probs())
        tail += std::pow(p, k) * std::pow(1 - p, i) * gamma(s + double(k + i)) /
                (kf * factorial(i));
    return head - tail;
  };
  a.mfe_at_minus_one = [m, b, k] { return bucket_constants(m, b, k); };
  a.series_an = [m, b, k](std::uint64_t n) {
    if (n <= b) return 0.0;
    double acc = 0;
    for (double p : m.probs())
      acc += std::exp(detail::lfactorial(double(n)) - detail::lfactorial(k) -
                      detail::lfactorial(double(n - k)) + k * std::log(p) +
                      double(n - k) * std::log1p(-p));
    return acc;
  };
  a.strip = {-(b + 1.0), kInf};
  a.decay_q = b + 1;
  return a;
}

// Forms for the e0 toll with the leaf part removed (phi(bullet) = 0).
AnalyticToll e0_shifted_forms(const Toll& t, const ProbModel& m) {
  AnalyticToll a = blank(t, m);
  const double rho2 = rho(m, 2).real();
  // le(k, c, l) = l^k e^{-c l}, evaluated in log space so large l underflows to 0.
  auto le = [](int k, double c, double l) { return l > 0 ? std::exp(k * std::log(l) - c * l) : 0.0; };
  // S(l, k, power, scale) = l^k e^{-scale l} sum_a p^power (e^{scale (1 - p) l} - 1).
  auto S = [m, le](double l, int k, int power, double scale) {
    double acc = 0;
    for (double p : m.probs()) {
      const double x = scale * (1 - p) * l;
      const double d = x < 1 ? le(k, scale, l) * std::expm1(x) : le(k, scale * p, l) - le(k, scale, l);
      acc += std::pow(p, power) * d;
    }
    return acc;
  };
  a.fE = [S](double l) { return S(l, 1, 1, 1); };
  auto fC = [S, le, rho2](double l) { return S(l, 1, 1, 1) - le(2, 1, l) * (rho2 - 1) - S(l, 2, 2, 1); };
  a.fC = fC;
  a.fV = [S, le, rho2, fC](double l) {
    double v = 3 * S(l, 1, 1, 1) + 4 * (le(2, 1, l) * (1 - rho2) - S(l, 2, 2, 1)) +
               le(2, 2, l) * (rho2 - 1) + S(l, 2, 2, 2);
    return Estimate{v - 2 * fC(l), Method::closed_form, 0};
  };
  a.MfE = [m](cplx s) { return q_ratio(m, s) * gamma(s + 2.0); };
  a.MfV = [m](cplx s) {
    cplx g = gamma(s + 2.0);
    cplx v = q_ratio(m, s) * (3.0 * g + (s + 1.0) * (-4.0 * g + std::pow(2.0, -s - 2.0) * g));
    cplx mfe = q_ratio(m, s) * g;
    return ComplexEstimate{v + 2.0 * s * mfe, Method::closed_form, 0};
  };
  const double H = entropy(m);
  a.mfe_at_minus_one = [H] { return Estimate{H, Method::closed_form, 0}; };
  a.series_an = [m](std::uint64_t n) {
    if (n < 2) return 0.0;
    double acc = 0;
    for (double p : m.probs()) acc += n * p * std::pow(1 - p, double(n - 1));
    return acc;
  };
  a.strip = {-2, kInf};
  a.decay_q = 2;
  return a;
}

bool trivial_shift(const Toll& t) {
  switch (t.kind()) {
    case TollKind::zero:
    case TollKind::leaf:
      return true;
    case TollKind::fringe_size:
      return t.k() == 1;
    case TollKind::fringe_match:
      return t.pattern()->is_bullet();
    default:
      return false;
  }
}

AnalyticToll linear_forms(const Toll& t, const ProbModel& m) {
  AnalyticToll a = blank(t, m);
  std::vector<std::pair<double, AnalyticToll>> parts;
  double chi = 0;
  std::size_t nontrivial = 0;
  for (const auto& [c, term] : t.terms()) {
    parts.emplace_back(c, make_analytic(term, m));
    chi += c * term.chi();
    if (!trivial_shift(term)) ++nontrivial;
  }
  auto all = [&parts](auto member) {
    for (const auto& p : parts)
      if (!(p.second.*member)) return false;
    return true;
  };
  if (all(&AnalyticToll::fE))
    a.fE = [parts](double l) {
      double acc = 0;
      for (const auto& [c, at] : parts) acc += c * at.fE(l);
      return acc;
    };
  if (all(&AnalyticToll::fC))
    a.fC = [parts](double l) {
      double acc = 0;
      for (const auto& [c, at] : parts) acc += c * at.fC(l);
      return acc;
    };
  if (all(&AnalyticToll::MfE))
    a.MfE = [parts](cplx s) {
      cplx acc = 0;
      for (const auto& [c, at] : parts) acc += c * at.MfE(s);
      return acc;
    };
  if (all(&AnalyticToll::mfe_at_minus_one))
    a.mfe_at_minus_one = [parts] {
      Estimate e{0, Method::closed_form, 0};
      for (const auto& [c, at] : parts) {
        auto x = at.mfe_at_minus_one();
        e.value += c * x.value;
        e.error += std::abs(c) * x.error;
        if (x.method != Method::closed_form) e.method = x.method;
      }
      return e;
    };
  if (all(&AnalyticToll::series_an))
    a.series_an = [parts](std::uint64_t n) {
      double acc = 0;
      for (const auto& [c, at] : parts) acc += c * at.series_an(n);
      return acc;
    };
  a.strip = {-kInf, kInf};
  a.decay_q = std::numeric_limits<double>::infinity();
  for (const auto& [c, at] : parts) {
    if (trivial_shift(at.toll)) continue;
    a.strip.lo = std::max(a.strip.lo, at.strip.lo);
    a.strip.hi = std::min(a.strip.hi, at.strip.hi);
    a.decay_q = std::min(a.decay_q, at.decay_q);
  }
  if (!std::isfinite(a.decay_q)) a.decay_q = 2;
  // Variances are quadratic; they are available when at most one term carries a
  // non-leaf part, since leaf terms only move chi.
  if (nontrivial <= 1) {
    a.chi = 0;
    for (const auto& [c, at] : parts) {
      if (trivial_shift(at.toll)) continue;
      AnalyticToll base = shifted(at);
      const double cc = c;
      if (base.fV)
        a.fV = [fV = base.fV, cc](double l) {
          auto e = fV(l);
          return Estimate{cc * cc * e.value, e.method, cc * cc * e.error};
        };
      if (base.MfV)
        a.MfV = [MfV = base.MfV, cc](cplx s) {
          auto e = MfV(s);
          return ComplexEstimate{cc * cc * e.value, e.method, cc * cc * e.error};
        };
      if (base.cov_kernel)
        a.cov_kernel = [k = base.cov_kernel, cc](double l, double P) { return cc * cc * k(l, P); };
    }
    if (nontrivial == 0) {
      a.fV = [](double) { return Estimate{}; };
      a.MfV = [](cplx) { return ComplexEstimate{}; };
      a.cov_kernel = [](double, double) { return 0.0; };
    }
    a = with_chi(std::move(a), chi);
  }
  return a;
}

// Fills fV from the covariance kernel when no closed form was given.
void complete(AnalyticToll& a) {
  if (!a.fV && a.cov_kernel && a.chi == 0) {
    auto kernel = a.cov_kernel;
    const ProbModel m = a.model;
    const double q = a.decay_q;
    a.fV = [kernel, m, q](double l) {
      auto e = star_sum(m, [&kernel, l](double P) { return kernel(l, P); }, q, l);
      return Estimate{e.value, Method::harmonic_sum, e.error};
    };
  }
}

}  // namespace

AnalyticToll make_analytic(const Toll& toll, const ProbModel& model) {
  AnalyticToll a{toll, model};
  switch (toll.kind()) {
    case TollKind::zero:
      a = zero_forms(toll, model);
      break;
    case TollKind::leaf:
      a = with_chi(zero_forms(toll, model), 1);
      break;
    case TollKind::size:
      a = size_forms(toll, model);
      break;
    case TollKind::fringe_size:
      if (toll.k() == 1) {
        a = with_chi(zero_forms(toll, model), 1);
      } else {
        a = exact_count_forms(toll, model, toll.k(), 1.0);
      }
      break;
    case TollKind::fringe_size_ge:
      if (toll.k() == 1) {
        a = with_chi(size_forms(toll, model), 1);
      } else {
        a = fringe_ge_forms(toll, model, toll.k());
      }
      break;
    case TollKind::fringe_match: {
      const Trie& pat = *toll.pattern();
      if (pat.is_bullet()) {
        a = with_chi(zero_forms(toll, model), 1);
      } else {
        require(pat.alphabet_size() == model.size(),
                "pattern alphabet does not match the model");
        a = exact_count_forms(toll, model, static_cast<unsigned>(pat.string_count()),
                              pattern_probability(model, pat));
      }
      break;
    }
    case TollKind::k_protected:
      if (toll.k() == 1)
        a = size_forms(toll, model);
      else
        a = kprot_forms(toll, model, toll.k());
      break;
    case TollKind::bucket_occupancy:
      a = bucket_forms(toll, model, toll.b(), toll.k());
      break;
    case TollKind::e0:
    case TollKind::e0_minus_leaf:
    case TollKind::e0_minus_two_leaves: {
      a = with_chi(e0_shifted_forms(toll, model), toll.chi());
      break;
    }
    case TollKind::linear:
      a = linear_forms(toll, model);
      break;
    case TollKind::log_subtrees:
    case TollKind::log_size:
    case TollKind::custom:
      a = blank(toll, model);
      a.strip = {-2, 0};
      break;
  }
  complete(a);
  a.toll = toll;
  a.chi = toll.chi();
  return a;
}

}  // namespace trieclt::analytics
