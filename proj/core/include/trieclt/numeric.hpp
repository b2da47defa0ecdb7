#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string_view>

#include "trieclt/prob_model.hpp"

namespace trieclt::analytics {

using cplx = std::complex<double>;

enum class Method { closed_form, quadrature, series, harmonic_sum, dft, monte_carlo, multiprecision };
std::string_view method_name(Method m) noexcept;

struct Estimate {
  double value = 0;
  Method method = Method::closed_form;
  double error = 0;
};

struct ComplexEstimate {
  cplx value;
  Method method = Method::closed_form;
  double error = 0;
};

// Gamma function for complex arguments (Lanczos, reflection for Re z < 1/2).
cplx gamma(cplx z);
double gamma(double x);
// Regularised lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
// (1+p)^a - 1 - a p without cancellation for small p.
cplx binom_remainder(cplx a, double p);
// e^x - 1 - x, accurate for small x.
double expm1_minus_x(double x);

struct QuadResult {
  double value = 0;
  double error = 0;
};

// Adaptive Gauss-Kronrod on [a, b]; infinite limits allowed.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-12, unsigned max_depth = 18);

// Numeric Mellin transform of f at s: integral of f(x) x^{s-1} over (0, inf), split at x = 1
// and integrated in u = ln x. Throws QuadratureNotConverged when the achieved error exceeds
// abs_tol (relative to max(1, |value|)).
ComplexEstimate mellin_numeric(const std::function<double(double)>& f, cplx s,
                               double abs_tol = 1e-9);

// Sums over strings alpha of g(P(alpha)), optionally with every nonempty alpha counted twice.
// The tail beyond depth m is bounded assuming |g(P)| <= C P^q for small P, with C measured on
// the deepest level once scale * pmax^m is small.
struct PrefixSumOptions {
  double decay_q = 2;
  double scale = 1;
  bool star = false;
  double rel_tol = 1e-14;
  double abs_tol = 0;
  std::size_t max_depth = 4000;
};
ComplexEstimate prefix_sum(const ProbModel& model, const std::function<cplx(double)>& g,
                           const PrefixSumOptions& opts = {});
Estimate prefix_sum_real(const ProbModel& model, const std::function<double(double)>& g,
                         const PrefixSumOptions& opts = {});

}  // namespace trieclt::analytics
