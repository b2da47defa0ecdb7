#include <cmath>
#include <mutex>
#include <numbers>

#include "trieclt/analytics.hpp"
#include "trieclt/error.hpp"

namespace trieclt::analytics {

namespace {
constexpr std::size_t kDftSamples = 4096;
}

struct PsiFunction::Impl {
  std::function<double(double)> f;
  std::function<cplx(cplx)> mellin;
  std::function<Estimate()> mean;
  Estimate value;  // constant case
  mutable std::once_flag samples_once;
  mutable std::vector<double> samples;
  mutable double sample_error = 0;
};

PsiFunction::PsiFunction(double d, std::function<double(double)> f,
                         std::function<cplx(cplx)> mellin, std::function<Estimate()> mean)
    : impl_(std::make_shared<Impl>()), d_(d) {
  require(d > 0, "a periodic psi function needs a positive period");
  impl_->f = std::move(f);
  impl_->mellin = std::move(mellin);
  impl_->mean = std::move(mean);
}

PsiFunction PsiFunction::constant(Estimate value) {
  PsiFunction p(1.0, nullptr, nullptr, nullptr);
  p.d_ = 0;
  p.impl_->value = value;
  return p;
}

Estimate PsiFunction::operator()(double t) const {
  if (!periodic()) return impl_->value;
  const double d = d_;
  const double t0 = t - d * std::floor(t / d);
  const auto& f = impl_->f;
  double acc = 0;
  // k >= 0: x = e^{t0 - kd} decreasing to 0.
  int quiet = 0;
  for (int k = 0; k < 100000; ++k) {
    double u = t0 - k * d;
    double x = std::exp(u);
    if (x < 1e-300) break;
    double term = d * f(x) / x;
    acc += term;
    if (x < 1 && std::abs(term) < 1e-16 * std::max(1.0, std::abs(acc))) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
  }
  quiet = 0;
  for (int j = 1; j < 100000; ++j) {
    double u = t0 + j * d;
    if (u > 700) break;
    double x = std::exp(u);
    double term = d * f(x) / x;
    acc += term;
    if (x > 1 && std::abs(term) < 1e-16 * std::max(1.0, std::abs(acc))) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
  }
  return {acc, Method::harmonic_sum, 1e-14 * std::max(1.0, std::abs(acc))};
}

ComplexEstimate PsiFunction::fourier(long m) const {
  using std::numbers::pi;
  if (!periodic()) {
    if (m == 0) return {impl_->value.value, impl_->value.method, impl_->value.error};
    return {0.0, Method::closed_form, 0};
  }
  if (impl_->mellin) {
    cplx s(-1.0, -2 * pi * static_cast<double>(m) / d_);
    return {impl_->mellin(s), Method::closed_form, 0};
  }
  std::call_once(impl_->samples_once, [this] {
    impl_->samples.resize(kDftSamples);
    for (std::size_t j = 0; j < kDftSamples; ++j) {
      auto e = (*this)(d_ * static_cast<double>(j) / kDftSamples);
      impl_->samples[j] = e.value;
      impl_->sample_error = std::max(impl_->sample_error, e.error);
    }
  });
  cplx acc = 0;
  for (std::size_t j = 0; j < kDftSamples; ++j) {
    double ang = -2 * pi * static_cast<double>(m) * static_cast<double>(j) / kDftSamples;
    acc += impl_->samples[j] * cplx(std::cos(ang), std::sin(ang));
  }
  return {acc / static_cast<double>(kDftSamples), Method::dft, impl_->sample_error};
}

Estimate PsiFunction::mean() const {
  if (!periodic()) return impl_->value;
  if (impl_->mean) return impl_->mean();
  auto c = fourier(0);
  return {c.value.real(), c.method, c.error};
}

PsiFunction make_psi(const AnalyticToll& at, Psi x) {
  std::function<Estimate()> mean = [at, x]() -> Estimate {
    ComplexEstimate e;
    switch (x) {
      case Psi::E: e = mellin_fE(at, -1.0); break;
      case Psi::C: e = mellin_fC(at, -1.0); break;
      case Psi::V: e = mellin_fV(at, -1.0); break;
    }
    return {e.value.real(), e.method, e.error};
  };
  const double d = span(at.model);
  if (d == 0) return PsiFunction::constant(mean());

  std::function<double(double)> f;
  std::function<cplx(cplx)> mellin;
  switch (x) {
    case Psi::E:
      f = [at](double l) { return fE_eval(at, l).value; };
      if (at.MfE) mellin = [at](cplx s) { return mellin_fE(at, s).value; };
      break;
    case Psi::C:
      f = [at](double l) { return fC_eval(at, l).value; };
      if (at.MfE) mellin = [at](cplx s) { return mellin_fC(at, s).value; };
      break;
    case Psi::V:
      f = [at](double l) { return fV_eval(at, l).value; };
      if (at.MfV) mellin = [at](cplx s) { return mellin_fV(at, s).value; };
      break;
  }
  return PsiFunction(d, std::move(f), std::move(mellin), std::move(mean));
}

Estimate psi_eval(const AnalyticToll& at, Psi x, double t) { return make_psi(at, x)(t); }

ComplexEstimate psi_fourier(const AnalyticToll& at, Psi x, long m) {
  return make_psi(at, x).fourier(m);
}

}  // namespace trieclt::analytics
