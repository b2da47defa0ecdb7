#include <cmath>
#include <sstream>

#include <json.hpp>

#include "detail.hpp"
#include "trieclt/error.hpp"
#include "trieclt/string_source.hpp"
#include "trieclt/trie.hpp"

namespace trieclt::analytics {

namespace {

struct McMoments {
  double mean_phi = 0, se_phi = 0, cov_phi_n = 0, se_cov = 0;
};

// phi(T_lambda) and N_lambda over independent Poisson tries.
McMoments poisson_mc(const AnalyticToll& at, double lambda, const FallbackOptions& fb) {
  require(fb.mc_trials >= 2, "Monte Carlo fallback needs at least two trials");
  StringSource root(at.model, fb.seed);
  const double n = static_cast<double>(fb.mc_trials);
  double sp = 0, sn = 0, spp = 0, spn = 0, snn = 0;
  std::vector<double> phi(fb.mc_trials), cnt(fb.mc_trials);
  for (std::uint64_t i = 0; i < fb.mc_trials; ++i) {
    auto sample = sample_poisson(lambda, root.derive(i));
    phi[i] = eval_toll(at.toll, sample.trie);
    cnt[i] = static_cast<double>(sample.count);
    sp += phi[i];
    sn += cnt[i];
  }
  const double mp = sp / n, mn = sn / n;
  for (std::uint64_t i = 0; i < fb.mc_trials; ++i) {
    double a = phi[i] - mp, b = cnt[i] - mn;
    spp += a * a;
    spn += a * b;
    snn += b * b;
  }
  McMoments out;
  out.mean_phi = mp;
  out.se_phi = std::sqrt(spp / (n - 1) / n);
  out.cov_phi_n = spn / (n - 1);
  double m4 = 0;
  for (std::uint64_t i = 0; i < fb.mc_trials; ++i) {
    double z = (phi[i] - mp) * (cnt[i] - mn) - out.cov_phi_n;
    m4 += z * z;
  }
  out.se_cov = std::sqrt(m4 / (n - 1) / n);
  return out;
}

void check_strip(const AnalyticToll& at, cplx s) {
  if (!at.strip.contains(s.real())) {
    std::ostringstream msg;
    msg << "Re s = " << s.real() << " is outside the strip (" << at.strip.lo << ", "
        << at.strip.hi << ") for toll " << at.toll.name();
    fail(Errc::strip_violation, msg.str());
  }
}

Estimate poisson_mixture(const AnalyticToll& at, double lambda) {
  const double hi = lambda + 12 * std::sqrt(lambda) + 30;
  double acc = 0, amax = 0;
  for (std::uint64_t n = 0; static_cast<double>(n) <= hi; ++n) {
    double a = at.series_an(n);
    amax = std::max(amax, std::abs(a));
    acc += detail::po(lambda, static_cast<unsigned>(n)) * a;
  }
  acc -= at.chi * lambda * std::exp(-lambda);
  double tail = amax * (1 - gamma_p(std::floor(hi) + 1, lambda) + 1e-16);
  return {acc, Method::series, tail + 1e-15 * std::abs(acc)};
}

}  // namespace

Estimate fE_eval(const AnalyticToll& at, double lambda, const FallbackOptions& fb) {
  require(lambda > 0, "fE needs lambda > 0");
  if (at.fE) return {at.fE(lambda), Method::closed_form, 0};
  if (at.series_an) return poisson_mixture(at, lambda);
  if (fb.mc_trials > 0) {
    auto mc = poisson_mc(at, lambda, fb);
    return {mc.mean_phi - at.chi * lambda * std::exp(-lambda), Method::monte_carlo, mc.se_phi};
  }
  fail(Errc::no_method_available,
       "toll " + at.toll.name() + " has no closed form, no a_n series and no Monte Carlo budget");
}

Estimate fC_eval(const AnalyticToll& at, double lambda, const FallbackOptions& fb) {
  require(lambda > 0, "fC needs lambda > 0");
  if (at.fC) return {at.fC(lambda), Method::closed_form, 0};
  if (at.fE || at.series_an) {
    const double h = 1e-4 * std::max(1.0, lambda);
    auto f = [&](double x) { return fE_eval(at, x).value; };
    double d;
    if (lambda > 2 * h)
      d = (-f(lambda + 2 * h) + 8 * f(lambda + h) - 8 * f(lambda - h) + f(lambda - 2 * h)) / (12 * h);
    else
      d = (f(lambda + h) - f(lambda)) / h;
    return {lambda * d, Method::series, 1e-8 * std::max(1.0, std::abs(lambda * d))};
  }
  if (fb.mc_trials > 0) {
    auto mc = poisson_mc(at, lambda, fb);
    return {mc.cov_phi_n + at.chi * lambda * (lambda - 1) * std::exp(-lambda), Method::monte_carlo,
            mc.se_cov};
  }
  fail(Errc::no_method_available, "toll " + at.toll.name() + " has no way to evaluate fC");
}

Estimate fV_eval(const AnalyticToll& at, double lambda) {
  require(lambda > 0, "fV needs lambda > 0");
  if (at.fV) return at.fV(lambda);
  fail(Errc::no_method_available,
       "toll " + at.toll.name() + " has no closed form or covariance kernel for fV");
}

ComplexEstimate mellin_fE_quadrature(const AnalyticToll& at, cplx s) {
  if (!at.fE && !at.series_an)
    fail(Errc::no_method_available, "toll " + at.toll.name() + " has no fE to integrate");
  return mellin_numeric([&at](double x) { return fE_eval(at, x).value; }, s);
}

ComplexEstimate mellin_fE_series(const AnalyticToll& at, cplx s, std::uint64_t n_max) {
  if (!at.series_an) fail(Errc::no_method_available, "toll " + at.toll.name() + " has no a_n");
  require(n_max >= 2, "series needs n_max >= 2");
  // Gamma(n+s)/n! by the ratio (n+s)/(n+1).
  cplx w = gamma(s + 2.0) / 2.0;
  cplx acc = 0;
  double tail_a = 0;
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    double a = at.series_an(n);
    acc += w * a;
    if (n + 8 > n_max) tail_a = std::max(tail_a, std::abs(a));
    w *= (static_cast<double>(n) + s) / static_cast<double>(n + 1);
  }
  // |Gamma(n+s)/n!| ~ n^{Re s - 1}; the tail beyond n_max is about |w| n_max / |Re s|.
  double sig = std::abs(s.real());
  double tail = tail_a * std::abs(w) * static_cast<double>(n_max) / std::max(sig, 1e-3);
  return {acc, Method::series, tail};
}

ComplexEstimate mellin_fE(const AnalyticToll& at, cplx s) {
  check_strip(at, s);
  if (s == cplx(-1.0) && at.mfe_at_minus_one) {
    auto e = at.mfe_at_minus_one();
    return {e.value, e.method, e.error};
  }
  if (at.MfE) return {at.MfE(s), Method::closed_form, 0};
  if (at.fE) return mellin_fE_quadrature(at, s);
  if (at.series_an) return mellin_fE_series(at, s, 100000);
  fail(Errc::no_method_available, "toll " + at.toll.name() + " has no Mellin transform");
}

ComplexEstimate mellin_fC(const AnalyticToll& at, cplx s) {
  auto e = mellin_fE(at, s);
  return {-s * e.value, e.method, std::abs(s) * e.error};
}

ComplexEstimate mellin_fV(const AnalyticToll& at, cplx s) {
  check_strip(at, s);
  if (at.MfV) return at.MfV(s);
  if (at.fV) return mellin_numeric([&at](double x) { return at.fV(x).value; }, s);
  fail(Errc::no_method_available, "toll " + at.toll.name() + " has no Mellin transform of fV");
}

Estimate asym_mean(const AnalyticToll& at, double x, Mode) {
  require(x > 0, "asymptotic mean needs x > 0");
  const double H = entropy(at.model);
  auto psi = psi_eval(at, Psi::E, std::log(x));
  return {x * (at.chi + psi.value / H), psi.method, x * psi.error / H};
}

Estimate asym_var(const AnalyticToll& at, double x, Mode mode) {
  require(x > 0, "asymptotic variance needs x > 0");
  const double H = entropy(at.model);
  const double t = std::log(x);
  auto v = psi_eval(at, Psi::V, t);
  if (mode == Mode::poisson)
    return {at.chi * at.chi + v.value / H, v.method, v.error / H};
  auto c = psi_eval(at, Psi::C, t);
  double val = v.value / H - c.value * c.value / (H * H) - 2 * at.chi * c.value / H;
  double err = v.error / H + (2 * std::abs(c.value) / (H * H) + 2 * std::abs(at.chi) / H) * c.error;
  return {val, v.method, err};
}

Estimate eval_F_sum(const std::function<double(double)>& f, const ProbModel& m, double lambda,
                    double decay_q) {
  require(lambda > 0, "harmonic sum needs lambda > 0");
  PrefixSumOptions o;
  o.decay_q = decay_q;
  o.scale = std::max(1.0, lambda);
  auto e = prefix_sum_real(m, [&](double P) { return f(lambda * P); }, o);
  return {e.value, Method::harmonic_sum, e.error};
}

std::string AnalyticReport::to_json() const {
  nlohmann::json j;
  j["quantity"] = quantity;
  j["args"] = args;
  j["value"] = value;
  if (imag) j["imag"] = *imag;
  j["method"] = std::string(method_name(method));
  j["err_estimate"] = err_estimate;
  return j.dump();
}

}  // namespace trieclt::analytics
