#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "model_file.hpp"
#include "trieclt/analytics.hpp"
#include "trieclt/error.hpp"
#include "trieclt/montecarlo.hpp"
#include "trieclt/string_source.hpp"
#include "trieclt/toll.hpp"
#include "trieclt/trie.hpp"

namespace trieclt::cli {

namespace {

using analytics::AnalyticReport;
using analytics::cplx;
using analytics::Estimate;
using analytics::ComplexEstimate;
using nlohmann::json;

enum class Format { text, json, csv };

struct Globals {
  std::string model = "sym2";
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string format;
  std::string out_path;
};

struct NumArgs {
  double s = 0, s_imag = 0, lambda = 0, n = 0, t = 0;
  unsigned k = 0, b = 0, r = 2;
  long m = 0;
};

// Numbers in human output: 5 decimals, matching the printed tables.
std::string fixed5(double v) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(5) << v;
  return o.str();
}

std::string full(double v) {
  std::ostringstream o;
  o << std::setprecision(17) << v;
  return o.str();
}

unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("TRIECLT_THREADS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Format resolve_format(const std::string& f) {
  if (f.empty()) return Format::text;
  if (f == "json") return Format::json;
  if (f == "csv") return Format::csv;
  fail(Errc::invalid_argument, "unknown format: " + f);
}

bool given(const CLI::App* app, const std::string& name) { return app->count(name) > 0; }

Estimate real_part(const ComplexEstimate& e) { return {e.value.real(), e.method, e.error}; }

AnalyticReport report_of(const std::string& q, const Estimate& e) {
  AnalyticReport r;
  r.quantity = q;
  r.value = e.value;
  r.method = e.method;
  r.err_estimate = e.error;
  return r;
}

AnalyticReport report_of(const std::string& q, const ComplexEstimate& e) {
  AnalyticReport r = report_of(q, real_part(e));
  r.imag = e.value.imag();
  return r;
}

double size_param(const CLI::App* app, const NumArgs& a, const std::string& q) {
  if (given(app, "--n")) return a.n;
  if (given(app, "--lambda")) return a.lambda;
  fail(Errc::invalid_argument, q + " needs --n or --lambda");
}

double log_time(const CLI::App* app, const NumArgs& a, const std::string& q) {
  if (given(app, "--t")) return a.t;
  if (given(app, "--n")) return std::log(a.n);
  if (given(app, "--lambda")) return std::log(a.lambda);
  fail(Errc::invalid_argument, q + " needs --t, --n or --lambda");
}

unsigned k_param(const CLI::App* app, const NumArgs& a, const Toll& toll, const std::string& q) {
  if (given(app, "--k")) return a.k;
  switch (toll.kind()) {
    case TollKind::fringe_size:
    case TollKind::fringe_size_ge:
    case TollKind::k_protected:
      return toll.k();
    default:
      fail(Errc::invalid_argument, q + " needs --k or a toll that carries k");
  }
}

AnalyticReport analytic_quantity(const CLI::App* app, const std::string& q, const Toll& toll,
                                 const ProbModel& model, const NumArgs& a) {
  namespace an = analytics;
  const cplx s(a.s, a.s_imag);
  auto at = [&] { return an::make_analytic(toll, model); };
  auto need = [&](const char* flag) {
    if (!given(app, flag)) fail(Errc::invalid_argument, q + " needs " + flag);
  };

  if (q == "entropy") return report_of(q, Estimate{an::entropy(model)});
  if (q == "span") return report_of(q, Estimate{an::span(model)});
  if (q == "rho") {
    need("--s");
    return report_of(q, ComplexEstimate{an::rho(model, s)});
  }
  if (q == "fE" || q == "fC" || q == "fV") {
    need("--lambda");
    auto t = at();
    if (q == "fE") return report_of(q, an::fE_eval(t, a.lambda));
    if (q == "fC") return report_of(q, an::fC_eval(t, a.lambda));
    return report_of(q, an::fV_eval(t, a.lambda));
  }
  if (q == "mfe" || q == "mfc" || q == "mfv") {
    need("--s");
    auto t = at();
    if (q == "mfe") return report_of(q, an::mellin_fE(t, s));
    if (q == "mfc") return report_of(q, an::mellin_fC(t, s));
    return report_of(q, an::mellin_fV(t, s));
  }
  if (q == "psi-e" || q == "psi-v" || q == "psi-c") {
    const an::Psi which = q == "psi-e" ? an::Psi::E : q == "psi-v" ? an::Psi::V : an::Psi::C;
    auto t = at();
    if (given(app, "--m")) return report_of(q, an::psi_fourier(t, which, a.m));
    return report_of(q, an::psi_eval(t, which, log_time(app, a, q)));
  }
  if (q == "asym-mean")
    return report_of(q, an::asym_mean(at(), size_param(app, a, q), an::Mode::fixed));
  if (q == "asym-var-poisson")
    return report_of(q, an::asym_var(at(), size_param(app, a, q), an::Mode::poisson));
  if (q == "asym-var-fixed")
    return report_of(q, an::asym_var(at(), size_param(app, a, q), an::Mode::fixed));
  if (q == "fringe-dist") {
    const double n = given(app, "--n") ? a.n : 0;
    if (toll.kind() == TollKind::fringe_match && !given(app, "--k"))
      return report_of(q, an::fringe_dist(model, *toll.pattern(), n));
    return report_of(q, an::fringe_dist(model, k_param(app, a, toll, q), n));
  }
  if (q == "fringe-fluct") {
    need("--n");
    return report_of(q, an::fringe_fluct_var(model, k_param(app, a, toll, q), a.n));
  }
  if (q == "protected") return report_of(q, an::protected_constant(model, k_param(app, a, toll, q)));
  if (q == "protected-asym") {
    need("--k");
    return report_of(q, Estimate{an::protected_asymptotic(a.r, a.k)});
  }
  if (q == "bucket") {
    unsigned b = a.b, k = a.k;
    if (toll.kind() == TollKind::bucket_occupancy && !given(app, "--b")) {
      b = toll.b();
      k = toll.k();
    } else {
      need("--b");
    }
    return report_of(q, an::bucket_constants(model, b, k));
  }
  if (q == "fsum") {
    need("--lambda");
    auto t = at();
    return report_of(q, an::eval_F_sum([&t](double x) { return an::fE_eval(t, x).value; }, model,
                                       a.lambda, t.decay_q));
  }
  fail(Errc::invalid_argument, "unknown quantity: " + q);
}

void write_output(const Globals& g, std::ostream& out, const std::string& text) {
  if (g.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out_path);
  if (!f) fail(Errc::invalid_argument, "cannot open output file: " + g.out_path);
  f << text;
}

std::string error_json(std::string_view code, const std::string& message,
                       std::optional<double> achieved = std::nullopt) {
  json j{{"error", std::string(code)}, {"message", message}};
  if (achieved) j["achieved_error"] = *achieved;
  return j.dump();
}

std::string verdict_summary(const mc::SimReport& r) {
  std::ostringstream o;
  for (const auto& t : r.per_toll)
    o << t.name << ": mean " << fixed5(t.mean) << " var " << fixed5(t.var) << '\n';
  if (r.standardized)
    o << "skew " << fixed5(r.standardized->skew) << " exkurt " << fixed5(r.standardized->exkurt)
      << " ks " << fixed5(r.standardized->ks) << '\n';
  for (const auto& v : r.verdicts)
    o << (v.pass ? "PASS " : "FAIL ") << v.criterion << " observed " << fixed5(v.observed)
      << " target " << fixed5(v.target) << " tol " << fixed5(v.tol) << '\n';
  o << (r.all_pass() ? "overall PASS" : "overall FAIL") << '\n';
  return o.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random tries, additive functionals and their limit laws", "trieclt"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--model", g.model, "model file, or symR for the symmetric R-ary model");
  app.add_option("--seed", g.seed, "seed of every random draw");
  app.add_option("--threads", g.threads, "worker threads (default: TRIECLT_THREADS, then all cores)");
  app.add_option("--format", g.format, "json or csv (default: human-readable text)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out_path, "write the result to this file");

  // sample
  auto* sample = app.add_subcommand("sample", "draw one trie");
  std::uint64_t sample_n = 0;
  double sample_lambda = 0;
  auto* opt_n = sample->add_option("--n", sample_n, "number of strings");
  auto* opt_p = sample->add_option("--poisson", sample_lambda, "Poisson mean of the string count");
  opt_n->excludes(opt_p);
  opt_p->excludes(opt_n);

  // analytic
  auto* analytic = app.add_subcommand("analytic", "evaluate an analytic quantity");
  std::string toll_spec = "size", quantity;
  NumArgs num;
  analytic->add_option("--toll", toll_spec, "toll such as size, kprot=2 or fringe-k=3");
  analytic->add_option("--quantity", quantity, "entropy, span, rho, fE, fC, fV, mfe, mfc, mfv, psi-e, psi-v, psi-c, fsum, asym-mean, asym-var-poisson, asym-var-fixed, fringe-dist, fringe-fluct, protected, protected-asym or bucket")->required();
  analytic->add_option("--s", num.s, "real part of s");
  analytic->add_option("--s-imag", num.s_imag, "imaginary part of s");
  analytic->add_option("--lambda", num.lambda, "Poisson parameter");
  analytic->add_option("--n", num.n, "number of strings");
  analytic->add_option("--t", num.t, "log time for psi functions");
  analytic->add_option("--k", num.k, "fringe size or protection level");
  analytic->add_option("--b", num.b, "bucket size");
  analytic->add_option("--r", num.r, "alphabet size for protected-asym");
  analytic->add_option("--m", num.m, "Fourier index of a psi function");

  // verify
  auto* verify = app.add_subcommand("verify", "Monte Carlo check against the analytic prediction");
  std::string check;
  std::vector<std::string> verify_tolls;
  double verify_n = 0, verify_lambda = 0, rel_tol = 0.05, sigmas = 4;
  std::uint64_t trials = 1000;
  unsigned kmax = 5, cov_k = 2;
  verify->add_option("check", check, "clt, lln, fringe or cov")
      ->required()
      ->check(CLI::IsMember({"clt", "lln", "fringe", "cov"}));
  verify->add_option("--toll", verify_tolls, "toll such as size or fringe-k=2; repeat for joint moments");
  auto* vn = verify->add_option("--n", verify_n, "number of strings");
  auto* vl = verify->add_option("--lambda", verify_lambda, "Poisson parameter");
  vn->excludes(vl);
  vl->excludes(vn);
  verify->add_option("--trials", trials, "independent tries");
  verify->add_option("--kmax", kmax, "largest fringe size for the fringe check");
  verify->add_option("--k", cov_k, "fringe size for the covariance check");
  verify->add_option("--rel-tol", rel_tol, "relative tolerance of the fringe check");
  verify->add_option("--sigmas", sigmas, "Monte Carlo standard errors allowed by the cov check");

  // protected-table
  auto* table = app.add_subcommand("protected-table", "proportions of k-protected nodes");
  unsigned table_r = 2, table_kmax = 10;
  table->add_option("--r", table_r, "alphabet size of the symmetric model");
  table->add_option("--kmax", table_kmax, "largest k");

  // export
  auto* exp = app.add_subcommand("export", "tabulate a quantity on a grid as CSV");
  std::string exp_toll = "size", exp_quantity = "fE";
  double from = 1, to = 1000;
  std::size_t points = 50;
  bool log_grid = false;
  exp->add_option("--toll", exp_toll, "toll such as size, kprot=2 or fringe-k=3");
  exp->add_option("--quantity", exp_quantity, "fE, fC, fV, fsum, psi-e, psi-v or psi-c")
      ->check(CLI::IsMember({"fE", "fC", "fV", "fsum", "psi-e", "psi-v", "psi-c"}));
  exp->add_option("--from", from, "first grid point (lambda, or t for psi)");
  exp->add_option("--to", to, "last grid point");
  exp->add_option("--points", points, "number of grid points")->check(CLI::Range(2, 1000000));
  exp->add_flag("--log", log_grid, "geometric grid");

  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    const Format fmt = resolve_format(g.format);
    const ProbModel model = load_model(g.model);

    if (sample->parsed()) {
      if (!given(sample, "--n") && !given(sample, "--poisson"))
        fail(Errc::invalid_argument, "sample needs --n or --poisson");
      StringSource src(model, g.seed);
      Trie t;
      std::uint64_t count = sample_n;
      if (given(sample, "--poisson")) {
        auto ps = sample_poisson(sample_lambda, src);
        t = std::move(ps.trie);
        count = ps.count;
      } else {
        t = sample_fixed(sample_n, src);
      }
      std::ostringstream o;
      if (fmt == Format::csv) {
        o << "path,nu,internal\n";
        for (NodeId v = 0; v < t.size(); ++v)
          o << '"' << path_to_string(t.path(v)) << "\"," << t.node(v).nu << ','
            << (t.is_internal(v) ? 1 : 0) << '\n';
      } else {
        json j{{"count", count},
               {"size", t.size()},
               {"internal", t.internal_count()},
               {"external", t.external_count()},
               {"trie", json::parse(to_json(t))}};
        if (fmt == Format::json) {
          o << j.dump() << '\n';
        } else {
          o << "strings " << count << "\nsize " << t.size() << "\ninternal " << t.internal_count()
            << "\nexternal " << t.external_count() << '\n'
            << to_json(t) << '\n';
        }
      }
      write_output(g, out, o.str());
      return kExitOk;
    }

    if (analytic->parsed()) {
      const Toll toll = parse_toll(toll_spec);
      AnalyticReport r = analytic_quantity(analytic, quantity, toll, model, num);
      for (const auto* o : analytic->get_options())
        if (o->count() > 0 && o->get_name() != "--quantity")
          r.args[o->get_name().substr(2)] = o->results().back();
      if (!r.args.count("toll")) r.args["toll"] = toll_spec;
      r.args["model"] = model.label().empty() ? g.model : model.label();
      std::ostringstream o;
      if (fmt == Format::csv) {
        o << "quantity,value,imag,method,err_estimate\n"
          << r.quantity << ',' << full(r.value) << ',' << (r.imag ? full(*r.imag) : "") << ','
          << analytics::method_name(r.method) << ',' << full(r.err_estimate) << '\n';
      } else {
        // The analytic report is JSON in both json and default modes.
        o << r.to_json() << '\n';
      }
      write_output(g, out, o.str());
      return kExitOk;
    }

    if (verify->parsed()) {
      mc::ExperimentSpec spec{model, mc::SizeMode::fixed, 0, {}, trials, g.seed,
                              resolve_threads(g.threads)};
      if (given(verify, "--lambda")) {
        spec.mode = mc::SizeMode::poisson;
        spec.size = verify_lambda;
      } else if (given(verify, "--n")) {
        spec.size = verify_n;
      } else if (check != "cov") {
        fail(Errc::invalid_argument, "verify needs --n or --lambda");
      }
      if (verify_tolls.empty()) verify_tolls.push_back("size");
      for (const auto& ts : verify_tolls) spec.tolls.push_back(parse_toll(ts));

      mc::SimReport r;
      if (check == "clt") {
        r = mc::clt_check(spec);
      } else if (check == "lln") {
        r = mc::lln_check(spec);
      } else if (check == "fringe") {
        require(spec.mode == mc::SizeMode::fixed, "the fringe check runs at fixed n");
        r = mc::fringe_ratio_check(spec, kmax, rel_tol);
      } else {
        require(spec.mode == mc::SizeMode::poisson, "the cov check needs --lambda");
        r = mc::poisson_cov_check(spec, cov_k, sigmas);
      }
      std::string text = fmt == Format::json  ? r.to_json() + "\n"
                         : fmt == Format::csv ? r.to_csv()
                                              : verdict_summary(r);
      write_output(g, out, text);
      return r.all_pass() ? kExitOk : kExitStatFail;
    }

    if (table->parsed()) {
      require(table_r >= 2, "the alphabet size must be at least 2");
      require(table_kmax >= 1, "kmax must be positive");
      const ProbModel sym = ProbModel::symmetric(table_r);
      const double denom = 1 + std::log(static_cast<double>(table_r));
      std::ostringstream o;
      json rows = json::array();
      if (fmt == Format::csv) o << "k,mfe,proportion\n";
      for (unsigned k = 1; k <= table_kmax; ++k) {
        const double c = analytics::protected_constant(sym, k).value;
        if (fmt == Format::csv)
          o << k << ',' << full(c) << ',' << full(c / denom) << '\n';
        else if (fmt == Format::json)
          rows.push_back({{"k", k}, {"mfe", c}, {"proportion", c / denom}});
        else
          o << std::setw(3) << k << "  " << fixed5(c) << "  " << fixed5(c / denom) << '\n';
      }
      if (fmt == Format::json) o << json{{"r", table_r}, {"rows", rows}}.dump() << '\n';
      write_output(g, out, o.str());
      return kExitOk;
    }

    if (exp->parsed()) {
      const Toll toll = parse_toll(exp_toll);
      auto at = analytics::make_analytic(toll, model);
      const bool is_psi = exp_quantity.rfind("psi-", 0) == 0;
      if (log_grid) require(from > 0 && to > 0, "a geometric grid needs positive end points");
      std::ostringstream o;
      o << (is_psi ? "t" : "lambda") << ",value,err_estimate\n";
      for (std::size_t i = 0; i < points; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(points - 1);
        const double x = log_grid ? from * std::pow(to / from, u) : from + (to - from) * u;
        Estimate e;
        if (exp_quantity == "fE") e = analytics::fE_eval(at, x);
        else if (exp_quantity == "fC") e = analytics::fC_eval(at, x);
        else if (exp_quantity == "fV") e = analytics::fV_eval(at, x);
        else if (exp_quantity == "fsum")
          e = analytics::eval_F_sum([&at](double y) { return analytics::fE_eval(at, y).value; },
                                    model, x, at.decay_q);
        else
          e = analytics::psi_eval(at,
                                  exp_quantity == "psi-e"   ? analytics::Psi::E
                                  : exp_quantity == "psi-v" ? analytics::Psi::V
                                                            : analytics::Psi::C,
                                  x);
        o << full(x) << ',' << full(e.value) << ',' << full(e.error) << '\n';
      }
      write_output(g, out, o.str());
      return kExitOk;
    }
  } catch (const NumericError& e) {
    err << error_json(errc_name(e.code()), e.what(), e.achieved_error()) << '\n';
    return kExitError;
  } catch (const Error& e) {
    err << error_json(errc_name(e.code()), e.what()) << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << error_json("internal", e.what()) << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace trieclt::cli
