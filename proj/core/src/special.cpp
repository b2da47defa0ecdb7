#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "trieclt/error.hpp"
#include "trieclt/numeric.hpp"

namespace trieclt::analytics {

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::closed_form: return "closed-form";
    case Method::quadrature: return "quadrature";
    case Method::series: return "series";
    case Method::harmonic_sum: return "harmonic-sum";
    case Method::dft: return "dft";
    case Method::monte_carlo: return "monte-carlo";
    case Method::multiprecision: return "multiprecision";
  }
  return "unknown";
}

namespace {

constexpr double kLanczosG = 7;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

cplx gamma(cplx z) {
  using std::numbers::pi;
  if (z.imag() == 0) return gamma(z.real());
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma(1.0 - z));
  z -= 1.0;
  cplx x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  cplx t = z + kLanczosG + 0.5;
  return std::sqrt(2 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

double gamma(double x) {
  if (x == std::floor(x) && x <= 0) fail(Errc::invalid_argument, "gamma pole");
  return std::tgamma(x);
}

double gamma_p(double a, double x) {
  if (x <= 0) return 0;
  return boost::math::gamma_p(a, x);
}

double expm1_minus_x(double x) {
  if (std::abs(x) < 1e-2) {
    double term = x * x / 2, sum = 0;
    for (int k = 3; k < 12; ++k) {
      sum += term;
      term *= x / k;
    }
    return sum;
  }
  return std::expm1(x) - x;
}

cplx binom_remainder(cplx a, double p) {
  if (p < 1e-2) {
    // sum_{j>=2} C(a, j) p^j
    cplx c = a * (a - 1.0) / 2.0;
    cplx pj = p * p;
    cplx sum = 0;
    for (int j = 2; j < 40; ++j) {
      cplx term = c * pj;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
      c *= (a - static_cast<double>(j)) / static_cast<double>(j + 1);
      pj *= p;
    }
    return sum;
  }
  return std::exp(a * std::log1p(p)) - 1.0 - a * p;
}

}  // namespace trieclt::analytics
