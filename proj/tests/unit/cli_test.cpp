#include <cmath>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli/cli.hpp"
#include "cli/model_file.hpp"
#include "trieclt/analytics.hpp"
#include "trieclt/error.hpp"
#include "trieclt/trie.hpp"

namespace trieclt::cli {
namespace {

using nlohmann::json;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "trieclt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string model(const char* name) { return std::string(TRIECLT_TEST_MODEL_DIR) + "/" + name; }

TEST(Cli, ModelFiles) {
  EXPECT_EQ(analytics::span(load_model(model("p37.json"))), 0);
  EXPECT_NEAR(analytics::span(load_model(model("sym2.json"))), std::log(2.0), 1e-15);
  EXPECT_EQ(load_model(model("sym4.json")).size(), 4u);
  EXPECT_EQ(load_model("sym3").size(), 3u);
  auto m = parse_model(R"({"probs": [0.5, 0.25, 0.25], "label": "x"})");
  EXPECT_EQ(m.label(), "x");
  EXPECT_THROW(parse_model(R"({"probs": [0.5, 0.6]})"), Error);
  EXPECT_THROW(parse_model("not json"), Error);
  EXPECT_THROW(load_model("/nonexistent/model.json"), Error);
}

TEST(Cli, Sample) {
  auto one = run({"sample", "--model", model("sym2.json"), "--n", "1", "--seed", "7", "--format", "json"});
  ASSERT_EQ(one.code, 0) << one.err;
  auto j = json::parse(one.out);
  EXPECT_EQ(j["size"], 1);
  EXPECT_TRUE(trie_from_json(j["trie"].dump()).is_bullet());

  auto zero = run({"sample", "--n", "0"});
  EXPECT_EQ(zero.code, 0);

  auto a = run({"sample", "--poisson", "50", "--seed", "1", "--format", "json"});
  auto b = run({"sample", "--poisson", "50", "--seed", "1", "--format", "json"});
  EXPECT_EQ(a.out, b.out);
  auto ja = json::parse(a.out);
  EXPECT_EQ(ja["external"], ja["count"]);

  auto both = run({"sample", "--n", "3", "--poisson", "2"});
  EXPECT_EQ(both.code, kExitError);
}

TEST(Cli, Analytic) {
  auto r = run({"analytic", "--toll", "size", "--quantity", "mfe", "--s", "-1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["value"], 1.0);
  for (const char* key : {"quantity", "args", "value", "method", "err_estimate"}) EXPECT_TRUE(j.contains(key));

  auto p = json::parse(run({"analytic", "--toll", "kprot=2", "--model", model("sym2.json"), "--quantity",
                            "protected"}).out);
  EXPECT_NEAR(p["value"].get<double>(), 0.55685, 1e-5);

  auto f = json::parse(run({"analytic", "--toll", "fringe-k=3", "--quantity", "mfe", "--s", "-1"}).out);
  EXPECT_NEAR(f["value"].get<double>(), 1.0 / 6, 1e-12);

  for (std::vector<std::string> args :
       {std::vector<std::string>{"--quantity", "entropy"}, {"--quantity", "span"},
        {"--quantity", "rho", "--s", "2"}, {"--quantity", "fE", "--lambda", "2"},
        {"--quantity", "fC", "--lambda", "2"}, {"--quantity", "fV", "--lambda", "2"},
        {"--quantity", "mfc", "--s", "-0.5", "--s-imag", "1"}, {"--quantity", "mfv", "--s", "-1"},
        {"--quantity", "psi-e", "--t", "0.3"}, {"--quantity", "psi-v", "--m", "1"},
        {"--quantity", "psi-c", "--n", "100"}, {"--quantity", "asym-mean", "--n", "1000"},
        {"--quantity", "asym-var-poisson", "--lambda", "1000"},
        {"--quantity", "asym-var-fixed", "--n", "1000"},
        {"--quantity", "fringe-dist", "--k", "2", "--n", "1000"},
        {"--quantity", "fringe-fluct", "--k", "2", "--n", "1000"},
        {"--quantity", "protected-asym", "--r", "2", "--k", "10"},
        {"--quantity", "bucket", "--b", "3", "--k", "0"}, {"--quantity", "fsum", "--lambda", "64"}}) {
    args.insert(args.begin(), "analytic");
    auto out = run(args);
    ASSERT_EQ(out.code, 0) << args[2] << ": " << out.err;
    EXPECT_NO_THROW(json::parse(out.out));
  }
}

TEST(Cli, ErrorsAreJsonOnStderr) {
  auto r = run({"analytic", "--toll", "size", "--quantity", "mfe", "--s", "0.5"});
  EXPECT_EQ(r.code, kExitError);
  auto j = json::parse(r.err);
  EXPECT_EQ(j["error"], "StripViolation");

  auto bad_model = run({"--model", "/nonexistent.json", "analytic", "--quantity", "entropy"});
  EXPECT_EQ(bad_model.code, kExitError);
  EXPECT_NO_THROW(json::parse(bad_model.err));

  auto bad_toll = run({"analytic", "--toll", "bogus", "--quantity", "entropy"});
  EXPECT_EQ(bad_toll.code, kExitError);

  EXPECT_EQ(run({"nonsense"}).code, kExitError);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, ProtectedTable) {
  auto r = run({"protected-table", "--r", "2", "--kmax", "10"});
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 10);
  EXPECT_NE(r.out.find("0.55685"), std::string::npos);

  auto csv = run({"protected-table", "--r", "2", "--kmax", "3", "--format", "csv"});
  EXPECT_EQ(csv.out.substr(0, 16), "k,mfe,proportion");
}

TEST(Cli, VerifyExitCodes) {
  auto ok = run({"verify", "lln", "--toll", "e0", "--n", "1000", "--trials", "50", "--threads", "2"});
  EXPECT_EQ(ok.code, kExitOk) << ok.out;
  EXPECT_NE(ok.out.find("overall PASS"), std::string::npos);

  // An impossible tolerance turns the fringe check into a statistical failure.
  auto fail = run({"verify", "fringe", "--model", model("p37.json"), "--n", "2000", "--trials", "3",
                   "--kmax", "3", "--rel-tol", "1e-9"});
  EXPECT_EQ(fail.code, kExitStatFail);

  auto js = run({"verify", "cov", "--lambda", "2", "--trials", "2000", "--format", "json"});
  EXPECT_NO_THROW(json::parse(js.out));
}

TEST(Cli, ThreadsFromEnvironment) {
  ::setenv("TRIECLT_THREADS", "3", 1);
  auto a = run({"verify", "clt", "--toll", "size", "--n", "256", "--trials", "100", "--format", "json"});
  ::unsetenv("TRIECLT_THREADS");
  auto b = run({"verify", "clt", "--toll", "size", "--n", "256", "--trials", "100", "--format", "json",
                "--threads", "1"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, Export) {
  auto r = run({"export", "--toll", "size", "--quantity", "fE", "--from", "1", "--to", "100", "--points",
                "5", "--log"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);
  EXPECT_EQ(r.out.substr(0, 6), "lambda");
}

}  // namespace
}  // namespace trieclt::cli
