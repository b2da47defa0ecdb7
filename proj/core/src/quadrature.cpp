#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "trieclt/error.hpp"
#include "trieclt/numeric.hpp"

namespace trieclt::analytics {

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     unsigned max_depth) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0;
  double v = gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, rel_tol, &err);
  return {v, err};
}

ComplexEstimate mellin_numeric(const std::function<double(double)>& f, cplx s, double abs_tol) {
  const double sigma = s.real(), tau = s.imag();
  auto part = [&](bool imag_part) {
    return [&, imag_part](double u) {
      double x = std::exp(u);
      if (x == 0 || !std::isfinite(x)) return 0.0;
      double fx = f(x);
      if (fx == 0) return 0.0;
      double w = std::exp(sigma * u);
      if (!std::isfinite(w)) return 0.0;
      double ang = tau * u;
      return fx * w * (imag_part ? std::sin(ang) : std::cos(ang));
    };
  };
  const double inf = std::numeric_limits<double>::infinity();
  auto re_lo = integrate(part(false), -inf, 0.0);
  auto re_hi = integrate(part(false), 0.0, inf);
  QuadResult im_lo{}, im_hi{};
  if (tau != 0) {
    im_lo = integrate(part(true), -inf, 0.0);
    im_hi = integrate(part(true), 0.0, inf);
  }
  cplx v(re_lo.value + re_hi.value, im_lo.value + im_hi.value);
  double err = re_lo.error + re_hi.error + im_lo.error + im_hi.error;
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || err > abs_tol * std::max(1.0, std::abs(v))) {
    std::ostringstream msg;
    msg << "Mellin quadrature at s=" << s << " reached error " << err;
    throw NumericError(Errc::quadrature_not_converged, msg.str(), err);
  }
  return {v, Method::quadrature, err};
}

}  // namespace trieclt::analytics
