#include "trieclt/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "trieclt/analytics.hpp"
#include "trieclt/error.hpp"
#include "trieclt/stats.hpp"
#include "trieclt/string_source.hpp"

namespace trieclt::mc {

namespace {

Trie draw(const ExperimentSpec& spec, const StringSource& src, std::uint64_t& count) {
  if (spec.mode == SizeMode::fixed) {
    count = static_cast<std::uint64_t>(std::llround(spec.size));
    return sample_fixed(count, src);
  }
  auto s = sample_poisson(spec.size, src);
  count = s.count;
  return std::move(s.trie);
}

std::vector<double> column(const SimReport& r, std::size_t j) {
  std::vector<double> out(r.values.size());
  for (std::size_t i = 0; i < r.values.size(); ++i) out[i] = r.values[i][j];
  return out;
}

bool all_integer_valued(const ExperimentSpec& spec) {
  return !spec.tolls.empty() && spec.tolls[0].integer_valued();
}

}  // namespace

void ExperimentSpec::validate() const {
  require(trials >= 2, "an experiment needs at least two trials");
  require(size > 0, "the size parameter must be positive");
  if (mode == SizeMode::fixed)
    require(size == std::floor(size), "fixed-n experiments need an integer n");
}

std::string ExperimentSpec::to_json() const {
  nlohmann::json j;
  j["probs"] = model.probs();
  if (!model.label().empty()) j["model"] = model.label();
  j["mode"] = mode == SizeMode::fixed ? "fixed" : "poisson";
  j[mode == SizeMode::fixed ? "n" : "lambda"] = size;
  auto& t = j["tolls"] = nlohmann::json::array();
  for (const auto& toll : tolls) t.push_back(toll.name());
  j["trials"] = trials;
  j["seed"] = seed;
  return j.dump();
}

bool SimReport::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

std::string SimReport::to_json() const {
  nlohmann::json j;
  j["spec_echo"] = nlohmann::json::parse(spec_echo);
  auto& pt = j["per_toll"] = nlohmann::json::object();
  for (std::size_t i = 0; i < per_toll.size(); ++i) {
    std::string key = per_toll[i].name;
    if (pt.contains(key)) key += "#" + std::to_string(i);
    pt[key] = {{"mean", per_toll[i].mean},
               {"var", per_toll[i].var},
               {"se_mean", per_toll[i].se_mean},
               {"se_var", per_toll[i].se_var}};
  }
  j["cov_matrix"] = cov_matrix;
  if (standardized)
    j["standardized_stats"] = {
        {"skew", standardized->skew}, {"exkurt", standardized->exkurt}, {"ks", standardized->ks}};
  auto& vs = j["verdicts"] = nlohmann::json::array();
  for (const auto& v : verdicts)
    vs.push_back({{"criterion", v.criterion},
                  {"target", v.target},
                  {"observed", v.observed},
                  {"tol", v.tol},
                  {"pass", v.pass}});
  j["degenerate"] = degenerate;
  return j.dump(2);
}

std::string SimReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "trial,count";
  for (const auto& t : per_toll) out << ',' << t.name;
  out << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << i << ',' << (i < counts.size() ? counts[i] : 0);
    for (double v : values[i]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

std::vector<std::vector<double>> run_trials(const ExperimentSpec& spec, std::size_t width,
                                            const TrialFn& fn, std::vector<std::uint64_t>* counts) {
  spec.validate();
  const std::uint64_t n = spec.trials;
  std::vector<std::vector<double>> out(n);
  std::vector<std::uint64_t> cnt(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::uint64_t> next{0};
  StringSource root(spec.model, spec.seed);
  auto worker = [&] {
    for (std::uint64_t i; (i = next.fetch_add(1)) < n;) {
      try {
        auto t = draw(spec, root.derive(i), cnt[i]);
        out[i] = fn(t, cnt[i]);
        require(out[i].size() == width, "trial function returned the wrong width");
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(n)));
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  if (counts) *counts = std::move(cnt);
  return out;
}

SimReport estimate_moments(const ExperimentSpec& spec) {
  require(!spec.tolls.empty(), "an experiment needs at least one toll");
  SimReport r;
  r.spec_echo = spec.to_json();
  const auto& tolls = spec.tolls;
  r.values = run_trials(
      spec, tolls.size(),
      [&tolls](const Trie& t, std::uint64_t) {
        TrieProfile p(t);
        std::vector<double> v;
        v.reserve(tolls.size());
        for (const auto& toll : tolls) v.push_back(eval_additive(toll, p));
        return v;
      },
      &r.counts);
  const std::size_t k = tolls.size();
  std::vector<std::vector<double>> cols(k);
  for (std::size_t j = 0; j < k; ++j) {
    cols[j] = column(r, j);
    auto m = sample_moments(cols[j]);
    r.per_toll.push_back({tolls[j].name(), m.mean, m.var, m.se_mean, m.se_var});
  }
  r.cov_matrix.assign(k, std::vector<double>(k));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) r.cov_matrix[a][b] = sample_covariance(cols[a], cols[b]);
  auto m0 = sample_moments(cols[0]);
  if (m0.var < 1e-12) {
    r.degenerate = true;
  } else {
    r.standardized = StandardizedStats{m0.skew, m0.exkurt,
                                       ks_to_fitted_normal(cols[0], all_integer_valued(spec) ? 1 : 0)};
  }
  return r;
}

SimReport clt_check(const ExperimentSpec& spec, const CltOptions& opts) {
  SimReport r = estimate_moments(spec);
  const double x = spec.size;
  const auto& s = r.per_toll[0];
  std::optional<analytics::Estimate> target;
  try {
    auto at = analytics::make_analytic(spec.tolls[0], spec.model);
    target = analytics::asym_var(at, x,
                                 spec.mode == SizeMode::fixed ? analytics::Mode::fixed
                                                              : analytics::Mode::poisson);
  } catch (const Error&) {
  }
  if (r.degenerate) {
    const bool consistent = !target || std::abs(target->value) < 1e-6;
    r.verdicts.push_back({"degenerate", target ? target->value : 0.0, s.var / x, 1e-6, consistent});
    return r;
  }
  const auto& st = *r.standardized;
  r.verdicts.push_back({"skewness", 0, st.skew, opts.skew_tol, std::abs(st.skew) < opts.skew_tol});
  r.verdicts.push_back(
      {"excess_kurtosis", 0, st.exkurt, opts.exkurt_tol, std::abs(st.exkurt) < opts.exkurt_tol});
  r.verdicts.push_back({"ks_fitted_normal", 0, st.ks, opts.ks_tol, st.ks < opts.ks_tol});
  if (opts.compare_variance && target) {
    double tol = opts.var_sigmas * s.se_var / x + target->error;
    double obs = s.var / x;
    r.verdicts.push_back(
        {"variance_over_size", target->value, obs, tol, std::abs(obs - target->value) <= tol});
  }
  return r;
}

SimReport lln_check(const ExperimentSpec& spec, const LlnOptions& opts) {
  SimReport r = estimate_moments(spec);
  const double x = spec.size;
  auto at = analytics::make_analytic(spec.tolls[0], spec.model);
  const double target = analytics::asym_mean(at, x, analytics::Mode::fixed).value / x;
  auto ratios = column(r, 0);
  double max_dev = 0, within = 0;
  for (double& v : ratios) {
    v /= x;
    double dev = std::abs(v - target);
    max_dev = std::max(max_dev, dev);
    if (dev <= opts.eps * std::abs(target)) within += 1;
  }
  const double mean = sample_moments(ratios).mean;
  r.verdicts.push_back({"mean_ratio", target, mean, opts.rel_tol * std::abs(target),
                        std::abs(mean - target) <= opts.rel_tol * std::abs(target)});
  const double frac = within / static_cast<double>(ratios.size());
  r.verdicts.push_back({"fraction_within_eps", 1.0, frac, 0.05, frac >= 0.95});
  r.verdicts.push_back({"max_deviation", 0, max_dev, opts.eps * std::abs(target),
                        max_dev <= opts.eps * std::abs(target)});
  return r;
}

SimReport fringe_ratio_check(const ExperimentSpec& spec, unsigned kmax, double rel_tol) {
  require(kmax >= 1, "kmax must be positive");
  SimReport r;
  r.spec_echo = spec.to_json();
  // Columns: fraction of nodes whose fringe has k leaves, k = 1..kmax, then a partition flag.
  r.values = run_trials(
      spec, kmax + 1,
      [kmax](const Trie& t, std::uint64_t) {
        std::vector<double> c(kmax + 1, 0.0);
        std::uint64_t total = 0;
        for (const auto& node : t.nodes()) {
          total += 1;
          if (node.nu >= 1 && node.nu <= kmax) c[node.nu - 1] += 1;
        }
        const double size = static_cast<double>(t.size());
        for (unsigned k = 0; k < kmax; ++k) c[k] /= size;
        c[kmax] = total == t.size() ? 0.0 : 1.0;
        return c;
      },
      &r.counts);
  for (unsigned k = 1; k <= kmax; ++k) {
    auto col = column(r, k - 1);
    auto m = sample_moments(col);
    r.per_toll.push_back({"fringe-fraction-k=" + std::to_string(k), m.mean, m.var, m.se_mean, m.se_var});
    double target = analytics::fringe_dist(spec.model, k, spec.size).value;
    r.verdicts.push_back({"fringe_fraction_k=" + std::to_string(k), target, m.mean,
                          rel_tol * target, std::abs(m.mean - target) <= rel_tol * target});
  }
  double bad = 0;
  for (const auto& row : r.values) bad += row[kmax];
  r.verdicts.push_back({"fringe_partition", 0, bad, 0, bad == 0});
  return r;
}

SimReport poisson_cov_check(const ExperimentSpec& spec, unsigned k, double sigmas) {
  require(spec.mode == SizeMode::poisson, "the covariance check runs under the Poisson model");
  require(k >= 2, "the covariance check needs k >= 2");
  SimReport r;
  r.spec_echo = spec.to_json();
  const Toll toll = Toll::fringe_size(k);
  r.values = run_trials(
      spec, 2,
      [&toll](const Trie& t, std::uint64_t count) {
        return std::vector<double>{eval_toll(toll, t), static_cast<double>(count)};
      },
      &r.counts);
  auto phi = column(r, 0), n = column(r, 1);
  auto mp = sample_moments(phi), mn = sample_moments(n);
  r.per_toll.push_back({toll.name() + "(root)", mp.mean, mp.var, mp.se_mean, mp.se_var});
  r.per_toll.push_back({"N", mn.mean, mn.var, mn.se_mean, mn.se_var});
  const double cov = sample_covariance(phi, n);
  r.cov_matrix = {{mp.var, cov}, {cov, mn.var}};
  auto at = analytics::make_analytic(toll, spec.model);
  const double target = analytics::fC_eval(at, spec.size).value;
  const double tol = sigmas * covariance_se(phi, n);
  r.verdicts.push_back({"cov_phi_N", target, cov, tol, std::abs(cov - target) <= tol});
  return r;
}

}  // namespace trieclt::mc
