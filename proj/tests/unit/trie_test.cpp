#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "trieclt/error.hpp"
#include "trieclt/toll.hpp"
#include "trieclt/trie.hpp"

namespace trieclt {
namespace {

using testing::p37;
using testing::random_tries;
using testing::sym2;
using testing::trie_of;

// Node set straight from the definition: alpha is a node iff it prefixes some string and its
// parent prefixes at least two.
std::map<std::string, std::uint64_t> brute_force_nodes(const StringSet& s, std::uint32_t depth) {
  std::map<std::string, std::uint64_t> nu;
  for (std::uint64_t i = 0; i < s.size(); ++i) {
    Path p;
    nu[path_to_string(p)] += 1;
    for (std::uint32_t d = 0; d < depth; ++d) {
      p.push_back(s.letter(i, d));
      nu[path_to_string(p)] += 1;
    }
  }
  std::map<std::string, std::uint64_t> nodes;
  for (const auto& [key, count] : nu) {
    Path p = path_from_string(key);
    if (p.empty()) {
      nodes[key] = count;
      continue;
    }
    Path parent(p.begin(), p.end() - 1);
    if (nu[path_to_string(parent)] >= 2) nodes[key] = count;
  }
  return nodes;
}

TEST(Trie, EmptyBulletAndCherry) {
  Trie empty = sample_fixed(0, StringSource(sym2(), 1));
  EXPECT_TRUE(empty.empty());
  EXPECT_EQ(empty.size(), 0u);

  Trie one = sample_fixed(1, StringSource(sym2(), 7));
  EXPECT_TRUE(one.is_bullet());
  EXPECT_EQ(one.external_count(), 1u);

  Trie cherry = trie_of({"0", "1"});
  EXPECT_EQ(cherry.size(), 3u);
  EXPECT_EQ(cherry.internal_count(), 1u);
  EXPECT_EQ(cherry.external_count(), 2u);
  EXPECT_TRUE(cherry.is_internal(Trie::root()));
}

TEST(Trie, MatchesBruteForceNodeSet) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::uint64_t n = seed % 13;
    StringSource src(seed % 2 ? sym2() : p37(), seed);
    auto strings = StringSet::lazy(src, n);
    Trie t = build_trie(strings, 2);
    check_invariants(t);
    const std::uint32_t depth = t.empty() ? 0 : height(t) + 1;
    auto expected = brute_force_nodes(strings, depth);
    // Only nodes down to the trie height are in the brute-force map; deeper prefixes of single
    // strings are not nodes.
    std::map<std::string, std::uint64_t> actual;
    for (NodeId v = 0; v < t.size(); ++v) actual[path_to_string(t.path(v))] = t.node(v).nu;
    if (n == 0) {
      EXPECT_TRUE(t.empty());
      continue;
    }
    std::erase_if(expected, [&](const auto& kv) { return kv.first.size() > depth - 1; });
    EXPECT_EQ(actual, expected) << "seed " << seed;
    EXPECT_EQ(t.external_count(), n);
    EXPECT_EQ(t.string_count(), n);
  }
}

TEST(Trie, InvariantsOnSamples) {
  for (const auto& t : random_tries(300, 60, 3)) {
    ASSERT_NO_THROW(check_invariants(t));
    EXPECT_EQ(t.size(), t.internal_count() + t.external_count());
    std::uint64_t leaves = 0;
    for (NodeId v = 0; v < t.size(); ++v) {
      const auto& node = t.node(v);
      EXPECT_EQ(t.is_internal(v), node.nu >= 2);
      if (t.is_leaf(v)) {
        EXPECT_EQ(node.nu, 1u);
        ++leaves;
      }
    }
    EXPECT_EQ(leaves, t.string_count());
  }
}

TEST(Trie, SamplingIsDeterministic) {
  StringSource a(sym2(), 42), b(sym2(), 42);
  Trie x = sample_fixed(100, a), y = sample_fixed(100, b);
  EXPECT_EQ(x, y);
  EXPECT_EQ(x.external_count(), 100u);
  EXPECT_NE(x, sample_fixed(100, StringSource(sym2(), 43)));
}

TEST(Trie, BucketGrowthRoundTrip) {
  for (std::uint32_t b = 1; b <= 3; ++b) {
    for (std::uint64_t i = 0; i < 300; ++i) {
      StringSource src(i % 2 ? sym2() : p37(), 100 + i);
      auto strings = StringSet::lazy(src, i % 40);
      Trie full = build_trie(strings, 2);
      Trie bucket = bucket_trie(strings, 2, b);
      for (NodeId v = 0; v < bucket.size(); ++v)
        EXPECT_EQ(bucket.is_internal(v), bucket.node(v).nu >= b + 1);
      EXPECT_EQ(grow_buckets(bucket), full);
      if (b == 1) EXPECT_EQ(bucket, full);
    }
  }
}

TEST(Trie, BucketHandExample) {
  Trie t = bucket_trie(StringSet::explicit_streams({LetterStream::parse("0"), LetterStream::parse("1"),
                                                    LetterStream::parse("2")}),
                       3, 2);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_TRUE(t.is_internal(Trie::root()));
  for (NodeId v = 1; v < 4; ++v) EXPECT_TRUE(t.is_leaf(v));
}

TEST(Trie, FringeQueries) {
  Trie cherry = trie_of({"0", "1"});
  EXPECT_EQ(fringe(cherry, Path{}), cherry);
  EXPECT_TRUE(fringe(cherry, path_from_string("0")).is_bullet());
  EXPECT_TRUE(fringe(cherry, path_from_string("00")).empty());

  for (const auto& t : random_tries(60, 40, 5)) {
    if (t.empty()) continue;
    for (NodeId v = 0; v < t.size(); ++v) {
      Path alpha = t.path(v);
      Trie ta = fringe(t, alpha);
      for (NodeId w = 0; w < ta.size(); ++w) {
        Path beta = ta.path(w);
        Path ab = alpha;
        ab.insert(ab.end(), beta.begin(), beta.end());
        EXPECT_EQ(fringe(ta, beta), fringe(t, ab));
      }
    }
  }
}

TEST(Trie, ModifiedFringe) {
  auto s = sample_poisson(30, StringSource(sym2(), 9));
  const Trie& t = s.trie;
  for (NodeId v = 0; v < t.size(); ++v) {
    if (!t.is_leaf(v)) continue;
    Path below = t.path(v);
    below.push_back(0);
    const std::uint64_t nu = t.nu_of(below);
    Trie m = modified_fringe(t, below);
    if (nu == 0) EXPECT_TRUE(m.empty());
    if (nu == 1) EXPECT_TRUE(m.is_bullet());
  }
}

TEST(Trie, Ranks) {
  Trie cherry = trie_of({"0", "1"});
  EXPECT_EQ(rank(cherry, Path{}), 1u);
  EXPECT_EQ(rank(cherry, path_from_string("1")), 0u);
  Trie t = trie_of({"00", "01", "1"});
  EXPECT_EQ(rank(t, Path{}), 1u);
  EXPECT_THROW(rank(t, path_from_string("11")), Error);

  for (const auto& tr : random_tries(100, 50, 11)) {
    auto r = ranks(tr);
    for (NodeId v = 0; v < tr.size(); ++v) {
      EXPECT_EQ(r[v] == 0, !tr.is_internal(v));
      EXPECT_LE(r[v], height(fringe(tr, v)));
    }
  }
}

TEST(Trie, CountFringeEqual) {
  const Trie bullet = Trie::bullet(2);
  for (const auto& t : random_tries(100, 40, 13)) {
    if (t.empty()) continue;
    EXPECT_EQ(count_fringe_equal(t, bullet), t.external_count());
    if (!t.is_bullet()) EXPECT_EQ(count_fringe_equal(t, t), 1u);
    std::uint64_t brute = 0;
    Trie sub = fringe(t, t.size() / 2);
    for (NodeId v = 0; v < t.size(); ++v) brute += fringe(t, v) == sub;
    EXPECT_EQ(count_fringe_equal(t, sub), brute);
  }
}

TEST(Trie, SubtreeCounts) {
  auto b = count_subtrees(Trie::bullet(2));
  EXPECT_TRUE(b.exact);
  EXPECT_EQ(b.s, 1u);
  EXPECT_EQ(b.s1, 1u);
  auto c = count_subtrees(trie_of({"0", "1"}));
  EXPECT_EQ(c.s1, 4u);
  EXPECT_EQ(c.s, 6u);

  const Toll logsub = Toll::log_subtrees();
  for (const auto& t : random_tries(150, 60, 17)) {
    if (t.empty()) continue;
    auto sc = count_subtrees(t);
    if (sc.exact) {
      EXPECT_LE(sc.s1, sc.s);
      EXPECT_LE(sc.s, t.size() * sc.s1);
    }
    EXPECT_NEAR(eval_additive(logsub, t), std::log1p(std::exp(sc.log_s1)),
                1e-9 * std::max(1.0, sc.log_s1));
  }
}

TEST(Trie, LargeSubtreeCountsSwitchToLogs) {
  Trie t = sample_fixed(2000, StringSource(sym2(), 3));
  auto sc = count_subtrees(t);
  EXPECT_FALSE(sc.exact);
  EXPECT_GT(sc.log_s1, 62 * std::log(2.0));
  EXPECT_LE(sc.log_s1, sc.log_s);
}

TEST(Trie, JsonRoundTrip) {
  for (const auto& t : random_tries(50, 30, 19)) {
    Trie back = trie_from_json(to_json(t));
    EXPECT_EQ(back, t);
  }
  EXPECT_THROW(trie_from_json("{\"alphabet_size\": 2, \"nodes\": [{\"path\": \"0\", \"nu\": 1}]}"),
               Error);
}

TEST(Trie, AddStringMatchesRebuild) {
  StringSource src(p37(), 23);
  Trie t = build_trie(StringSet::lazy(src, 0), 2);
  for (std::uint64_t n = 1; n <= 60; ++n) {
    auto r = add_random_string(t);
    EXPECT_EQ(r.trie, build_trie(StringSet::lazy(src, n), 2));
    EXPECT_GE(r.trie.internal_count(), t.internal_count());
    t = r.trie;
  }
  Trie bullet = trie_of({"0101"});
  auto r = add_string(bullet, LetterStream::parse("0110"));
  EXPECT_EQ(r.delta.kind, StringDelta::Kind::leaf_to_path);
  EXPECT_EQ(r.delta.new_internal, 3u);
  check_invariants(r.trie);
}

TEST(Trie, DepthCapOnIdenticalStrings) {
  std::vector<Letter> zeros(kMaxDepth + 10, 0);
  auto s = StringSet::explicit_streams({LetterStream(zeros), LetterStream(zeros)});
  try {
    build_trie(s, 2);
    FAIL() << "expected a depth cap error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::depth_cap_exceeded);
  }
}

TEST(Trie, PoissonEmptyFractionAndCount) {
  const double lambda = 1e-4;
  StringSource src(sym2(), 29);
  int empty = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) empty += sample_poisson(lambda, src.derive(i)).trie.empty();
  const double p = std::exp(-lambda);
  EXPECT_NEAR(empty / double(trials), p, 3 * std::sqrt(p * (1 - p) / trials) + 1e-12);

  const double l2 = 40;
  double sum = 0;
  const int t2 = 4000;
  for (int i = 0; i < t2; ++i) sum += double(sample_poisson(l2, src.derive(1000000 + i)).count);
  EXPECT_NEAR(sum / t2, l2, 3 * std::sqrt(l2 / t2));
}

// Conditioned on N = n the Poisson trie is the fixed-n trie: compare internal-node counts with a
// chi-square statistic over the small range of values.
TEST(Trie, PoissonConditionedOnCountMatchesFixed) {
  const std::uint64_t n = 6;
  StringSource src(p37(), 31);
  std::map<std::size_t, double> cond, fixed;
  double cond_total = 0;
  for (int i = 0; i < 60000 && cond_total < 4000; ++i) {
    auto s = sample_poisson(double(n), src.derive(i));
    if (s.count != n) continue;
    cond[s.trie.internal_count()] += 1;
    cond_total += 1;
  }
  const int fixed_trials = 20000;
  for (int i = 0; i < fixed_trials; ++i)
    fixed[sample_fixed(n, src.derive(5000000 + i)).internal_count()] += 1;
  double chi2 = 0;
  int cells = 0;
  for (const auto& [k, f] : fixed) {
    const double expect = f / fixed_trials * cond_total;
    if (expect < 5) continue;
    const double o = cond.count(k) ? cond[k] : 0;
    chi2 += (o - expect) * (o - expect) / expect;
    ++cells;
  }
  // Generous bound for the chi-square with (cells - 1) degrees of freedom, with the reference
  // distribution itself estimated.
  EXPECT_LT(chi2, 3.0 * cells + 10);
}

TEST(Trie, PathStrings) {
  Path p{0, 1, 10, 35};
  EXPECT_EQ(path_to_string(p), "01az");
  EXPECT_EQ(path_from_string("01az"), p);
}

}  // namespace
}  // namespace trieclt
