#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trieclt/numeric.hpp"
#include "trieclt/prob_model.hpp"
#include "trieclt/toll.hpp"

namespace trieclt::analytics {

// ---- model constants ----
double entropy(const ProbModel& m);
cplx rho(const ProbModel& m, cplx s);
cplx rho_derivative(const ProbModel& m, cplx s);
// gcd of {-ln p_a}; 0 in the aperiodic case.
double span(const ProbModel& m);

// ---- per-toll analytic data ----
struct Strip {
  double lo = -2;
  double hi = 0;
  bool contains(double re) const { return re > lo && re < hi; }
};

// Closed forms known for a toll under a model. Empty functions mean "not available".
// fE/fC/fV are the Poisson-model functions with the root term removed; cov_kernel(lambda, P)
// is Cov(phi(T_lambda), phi(T_lambda^alpha)) for P = P(alpha), used when chi = 0.
struct AnalyticToll {
  AnalyticToll(Toll t, ProbModel m) : toll(std::move(t)), model(std::move(m)) {}

  Toll toll;
  ProbModel model;
  double chi = 0;
  std::function<double(double)> fE;
  std::function<double(double)> fC;
  std::function<Estimate(double)> fV;
  std::function<cplx(cplx)> MfE;
  std::function<ComplexEstimate(cplx)> MfV;
  std::function<double(double, double)> cov_kernel;
  std::function<double(std::uint64_t)> series_an;
  // MfE(-1) for tolls where only the special value has a dedicated method.
  std::function<Estimate()> mfe_at_minus_one;
  Strip strip;
  // Decay exponent of fE at 0 (fE = O(x^q)); bounds the harmonic-sum tails.
  double decay_q = 2;
};

AnalyticToll make_analytic(const Toll& toll, const ProbModel& model);

// Monte Carlo fallback for a_n = E phi(T_n) when a toll has no closed forms.
struct FallbackOptions {
  std::uint64_t mc_trials = 0;
  std::uint64_t seed = 1;
  std::uint64_t n_max = 200;
};

Estimate fE_eval(const AnalyticToll& at, double lambda, const FallbackOptions& fb = {});
Estimate fC_eval(const AnalyticToll& at, double lambda, const FallbackOptions& fb = {});
Estimate fV_eval(const AnalyticToll& at, double lambda);
ComplexEstimate mellin_fE(const AnalyticToll& at, cplx s);
ComplexEstimate mellin_fC(const AnalyticToll& at, cplx s);
ComplexEstimate mellin_fV(const AnalyticToll& at, cplx s);
// Quadrature of fE regardless of closed forms.
ComplexEstimate mellin_fE_quadrature(const AnalyticToll& at, cplx s);
// sum_{n=2}^{n_max} Gamma(n+s)/n! a_n; the reported error is the estimated tail.
ComplexEstimate mellin_fE_series(const AnalyticToll& at, cplx s, std::uint64_t n_max);

// ---- psi functions ----
enum class Psi { E, V, C };

// A constant, or a d-periodic function of t given by the lattice sum
// d * sum_k e^{kd - t} f(e^{t - kd}).
class PsiFunction {
 public:
  PsiFunction(double d, std::function<double(double)> f, std::function<cplx(cplx)> mellin,
              std::function<Estimate()> mean);

  static PsiFunction constant(Estimate value);

  bool periodic() const noexcept { return d_ > 0; }
  double period() const noexcept { return d_; }
  Estimate operator()(double t) const;
  // Fourier coefficient m: MfX(-1 - 2 pi i m / d) when a transform is known, else a DFT of one
  // period with 2^12 samples. For a constant, m = 0 gives the constant.
  ComplexEstimate fourier(long m) const;
  Estimate mean() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
  double d_ = 0;
};

PsiFunction make_psi(const AnalyticToll& at, Psi x);
Estimate psi_eval(const AnalyticToll& at, Psi x, double t);
ComplexEstimate psi_fourier(const AnalyticToll& at, Psi x, long m);

// ---- asymptotic moments ----
enum class Mode { poisson, fixed };
Estimate asym_mean(const AnalyticToll& at, double x, Mode mode);
// Poisson: chi^2 + psiV/H; fixed: psiV/H - psiC^2/H^2 - 2 chi psiC/H.
Estimate asym_var(const AnalyticToll& at, double x, Mode mode);

// ---- harmonic sums ----
// sum over all strings alpha of f(lambda P(alpha)); f must be O(x^q) at 0.
Estimate eval_F_sum(const std::function<double(double)>& f, const ProbModel& m, double lambda,
                    double decay_q = 2);

// ---- fringe sizes ----
// E|T_k|_i, the expected number of internal nodes of a trie on k strings.
struct EkOptions {
  std::uint64_t mc_trials = 0;
  std::uint64_t seed = 1;
};
Estimate expected_internal(const ProbModel& m, unsigned k, const EkOptions& opts = {});

// Size / fringe-size pair: bilinear fV and its Mellin transform.
double fV_size_fringe(const ProbModel& m, unsigned k, double lambda, double e_k);
cplx mellin_fV_size_fringe(const ProbModel& m, unsigned k, cplx s, double e_k);
Estimate asym_cov_size_fringe(const ProbModel& m, unsigned k, double t, const EkOptions& opts = {});

// Limit of the fraction of fringe trees with k leaves at n (n only matters when periodic).
Estimate fringe_dist(const ProbModel& m, unsigned k, double n = 0);
Estimate fringe_dist(const ProbModel& m, const Trie& pattern, double n = 0);
// P(T_k = pattern) for k = |pattern|_e strings.
double pattern_probability(const ProbModel& m, const Trie& pattern);
Estimate fringe_fluct_var(const ProbModel& m, unsigned k, double n, const EkOptions& opts = {});

// ---- protected nodes ----
Estimate protected_constant(const ProbModel& m, unsigned k);
// MfE_{2prot,R}(-1) for the symmetric R-ary model.
Estimate symmetric_protected_constant(std::uint64_t R);
double protected_asymptotic(unsigned r, unsigned k);
// The same constant by quadrature of fE(x) x^{-2}.
Estimate protected_constant_quadrature(const ProbModel& m, unsigned k);

// ---- bucket tries ----
// MfE_{>b}(-1) = 1/b when k == 0, else MfE_{b;k}(-1).
Estimate bucket_constants(const ProbModel& m, unsigned b, unsigned k);

// MfE_{b;k}(-1) through the harmonic sum of the quadrature of fE, for cross-checks.
Estimate bucket_constant_quadrature(const ProbModel& m, unsigned b, unsigned k);

// ---- reports ----
struct AnalyticReport {
  std::string quantity;
  std::map<std::string, std::string> args;
  double value = 0;
  std::optional<double> imag;
  Method method = Method::closed_form;
  double err_estimate = 0;

  std::string to_json() const;
};

}  // namespace trieclt::analytics
