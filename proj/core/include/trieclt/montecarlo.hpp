#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trieclt/prob_model.hpp"
#include "trieclt/toll.hpp"
#include "trieclt/trie.hpp"

namespace trieclt::mc {

// Normality thresholds at 5000 trials, from the 99th percentile of the null statistics on normal
// samples of the same size (see tools/calibrate_normality).
inline constexpr double kSkewTol = 0.1;
inline constexpr double kExKurtTol = 0.2;
inline constexpr double kKsTol = 0.03;

enum class SizeMode { fixed, poisson };

struct ExperimentSpec {
  ProbModel model;
  SizeMode mode = SizeMode::fixed;
  double size = 0;  // n or lambda
  std::vector<Toll> tolls;
  std::uint64_t trials = 2;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void validate() const;
  std::string to_json() const;
};

struct TollSummary {
  std::string name;
  double mean = 0;
  double var = 0;
  double se_mean = 0;
  double se_var = 0;
};

struct Verdict {
  std::string criterion;
  double target = 0;
  double observed = 0;
  double tol = 0;
  bool pass = false;
};

struct StandardizedStats {
  double skew = 0;
  double exkurt = 0;
  double ks = 0;
};

struct SimReport {
  std::string spec_echo;
  std::vector<TollSummary> per_toll;
  std::vector<std::vector<double>> cov_matrix;
  std::optional<StandardizedStats> standardized;
  std::vector<Verdict> verdicts;
  bool degenerate = false;
  // Raw per-trial data: string counts and one column per toll.
  std::vector<std::uint64_t> counts;
  std::vector<std::vector<double>> values;

  bool all_pass() const;
  std::string to_json() const;
  std::string to_csv() const;
};

// Trial i draws its trie from StringSource(model, seed).derive(i); results are stored by trial
// index, so they do not depend on the thread count.
using TrialFn = std::function<std::vector<double>(const Trie&, std::uint64_t count)>;
std::vector<std::vector<double>> run_trials(const ExperimentSpec& spec, std::size_t width,
                                            const TrialFn& fn,
                                            std::vector<std::uint64_t>* counts = nullptr);

SimReport estimate_moments(const ExperimentSpec& spec);

struct CltOptions {
  double skew_tol = kSkewTol;
  double exkurt_tol = kExKurtTol;
  double ks_tol = kKsTol;
  // Compare Var/x with the analytic variance when it is available.
  bool compare_variance = true;
  double var_sigmas = 3;
};
// Checks the first toll of the experiment.
SimReport clt_check(const ExperimentSpec& spec, const CltOptions& opts = {});

struct LlnOptions {
  double rel_tol = 0.02;
  double eps = 0.05;
};
SimReport lln_check(const ExperimentSpec& spec, const LlnOptions& opts = {});

SimReport fringe_ratio_check(const ExperimentSpec& spec, unsigned kmax, double rel_tol = 0.05);

// Cov(phi_k(T_lambda), N_lambda) against fC_k(lambda); spec.mode must be poisson.
SimReport poisson_cov_check(const ExperimentSpec& spec, unsigned k, double sigmas = 4);

}  // namespace trieclt::mc
