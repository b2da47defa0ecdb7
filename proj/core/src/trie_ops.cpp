#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trieclt/error.hpp"
#include "trieclt/trie.hpp"

namespace trieclt {

std::vector<std::uint32_t> ranks(const Trie& t) {
  std::vector<std::uint32_t> rk(t.size(), 0);
  for (std::size_t i = t.size(); i-- > 0;) {
    const auto& n = t.node(static_cast<NodeId>(i));
    if (n.child_count == 0) continue;
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (std::uint16_t j = 0; j < n.child_count; ++j) best = std::min(best, rk[n.first_child + j]);
    rk[i] = best + 1;
  }
  return rk;
}

std::uint32_t rank(const Trie& t, std::span<const Letter> path) {
  auto v = t.find(path);
  if (!v) fail(Errc::node_not_in_trie, "node '" + path_to_string(path) + "' is not in the trie");
  // Only the fringe below v matters.
  return ranks(fringe(t, *v))[0];
}

std::uint32_t height(const Trie& t) {
  std::uint32_t h = 0;
  for (const auto& n : t.nodes()) h = std::max(h, n.depth);
  return h;
}

std::vector<std::uint64_t> subtree_sizes(const Trie& t) {
  std::vector<std::uint64_t> sz(t.size(), 1);
  for (std::size_t i = t.size(); i-- > 1;) sz[t.node(static_cast<NodeId>(i)).parent] += sz[i];
  return sz;
}

bool fringe_equals(const Trie& t, NodeId v, const Trie& other) {
  if (other.empty()) return v >= t.size();
  if (v >= t.size()) return false;
  if (t.node(v).nu != other.node(0).nu) return false;
  // Canonical BFS of T^v matches other's array order node for node.
  std::vector<NodeId> queue{v};
  queue.reserve(other.size());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    if (i >= other.size()) return false;
    const auto& a = t.node(queue[i]);
    const auto& b = other.node(static_cast<NodeId>(i));
    if (a.nu != b.nu || a.child_count != b.child_count) return false;
    if (i > 0 && a.letter != b.letter) return false;
    for (std::uint16_t j = 0; j < a.child_count; ++j) queue.push_back(a.first_child + j);
    if (queue.size() > other.size()) return false;
  }
  return queue.size() == other.size();
}

std::uint64_t count_fringe_equal(const Trie& t, const Trie& other) {
  require(!other.empty(), "fringe pattern must be nonempty");
  if (t.empty()) return 0;
  const auto sz = subtree_sizes(t);
  const std::uint64_t target_nu = other.node(0).nu;
  std::uint64_t count = 0;
  for (NodeId v = 0; v < t.size(); ++v)
    if (t.node(v).nu == target_nu && sz[v] == other.size() && fringe_equals(t, v, other)) ++count;
  return count;
}

namespace {

double log1p_exp(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

std::vector<double> log_root_subtrees(const Trie& t) {
  std::vector<double> ls(t.size(), 0.0);
  for (std::size_t i = t.size(); i-- > 0;) {
    const auto& n = t.node(static_cast<NodeId>(i));
    double acc = 0;
    for (std::uint16_t j = 0; j < n.child_count; ++j) acc += log1p_exp(ls[n.first_child + j]);
    ls[i] = acc;
  }
  return ls;
}

SubtreeCounts count_subtrees(const Trie& t) {
  require(!t.empty(), "subtree counts need a nonempty trie");
  __extension__ typedef unsigned __int128 u128;
  constexpr u128 cap = u128{1} << 62;
  std::vector<u128> s1(t.size(), 1);
  bool exact = true;
  for (std::size_t i = t.size(); i-- > 0 && exact;) {
    const auto& n = t.node(static_cast<NodeId>(i));
    u128 prod = 1;
    for (std::uint16_t j = 0; j < n.child_count && exact; ++j) {
      prod *= 1 + s1[n.first_child + j];
      if (prod > cap) exact = false;
    }
    s1[i] = prod;
  }
  SubtreeCounts out;
  const auto ls = log_root_subtrees(t);
  out.log_s1 = ls[0];
  double mx = *std::max_element(ls.begin(), ls.end());
  double acc = 0;
  for (double x : ls) acc += std::exp(x - mx);
  out.log_s = mx + std::log(acc);
  if (exact) {
    u128 s = 0;
    for (auto x : s1) {
      s += x;
      if (s > cap) {
        exact = false;
        break;
      }
    }
    if (exact) {
      out.exact = true;
      out.s1 = static_cast<std::uint64_t>(s1[0]);
      out.s = static_cast<std::uint64_t>(s);
    }
  }
  return out;
}

AddResult add_string(const Trie& t, LetterStream stream) {
  StringSet strings = t.strings() ? t.strings()->with(stream)
                      : t.empty() ? StringSet::explicit_streams({stream})
                                  : (fail(Errc::invalid_argument,
                                          "adding a string needs the generating strings"),
                                     StringSet{});
  Trie grown = bucket_trie(strings, t.alphabet_size(), t.bucket_size());
  AddResult res{std::move(grown), {}};
  const Trie& g = res.trie;
  // Follow the new string down to its leaf.
  NodeId v = Trie::root();
  Path p;
  while (!g.is_leaf(v)) {
    Letter a = stream.at(static_cast<std::uint32_t>(p.size()));
    p.push_back(a);
    v = *g.child(v, a);
  }
  if (t.empty()) {
    res.delta = {StringDelta::Kind::new_leaf, p, 0};
    return res;
  }
  Path parent(p.begin(), p.end() - (p.empty() ? 0 : 1));
  auto old_parent = t.find(parent);
  if (!p.empty() && old_parent && t.is_internal(*old_parent)) {
    res.delta = {StringDelta::Kind::new_leaf, p, 0};
  } else {
    // Deepest old node on the new string's path was a leaf; it became a path.
    std::size_t d = 0;
    NodeId u = Trie::root();
    while (d < p.size()) {
      auto c = t.child(u, p[d]);
      if (!c) break;
      u = *c;
      ++d;
    }
    res.delta = {StringDelta::Kind::leaf_to_path, t.path(u),
                 static_cast<std::uint32_t>(g.internal_count() - t.internal_count())};
  }
  return res;
}

AddResult add_random_string(const Trie& t) {
  if (!t.strings()) fail(Errc::invalid_argument, "trie has no string source");
  auto next = t.strings()->next_stream();
  if (!next) fail(Errc::invalid_argument, "trie strings are not backed by a source");
  return add_string(t, std::move(*next));
}

void check_invariants(const Trie& t) {
  auto bad = [](const std::string& m) { throw std::logic_error(m); };
  if (t.empty()) return;
  const auto b = t.bucket_size();
  std::size_t internal = 0;
  for (NodeId v = 0; v < t.size(); ++v) {
    const auto& n = t.node(v);
    if (n.nu == 0) bad("node with no strings");
    if (v == 0 && (n.parent != kNoNode || n.depth != 0)) bad("malformed root");
    if (v > 0) {
      if (n.parent >= v) bad("parent after child in BFS order");
      const auto& p = t.node(n.parent);
      if (n.depth != p.depth + 1) bad("depth mismatch");
      if (p.nu <= b) bad("child of an external node");
      if (n.nu <= b && p.child_count < 2) bad("leaf whose parent has one child");
      if (v > 1 && t.node(v - 1).depth == n.depth) {
        const auto& prev = t.node(v - 1);
        if (prev.parent > n.parent || (prev.parent == n.parent && prev.letter >= n.letter))
          bad("nodes not in canonical order");
      }
    }
    if (n.nu > b) {
      ++internal;
      if (n.child_count == 0) bad("internal node without children");
      std::uint64_t sum = 0;
      for (std::uint16_t j = 0; j < n.child_count; ++j) {
        const auto& c = t.node(n.first_child + j);
        if (c.parent != v) bad("child list broken");
        sum += c.nu;
      }
      if (sum != n.nu) bad("child counts do not add up");
    } else if (n.child_count != 0) {
      bad("external node with children");
    }
  }
  if (internal != t.internal_count()) bad("internal count mismatch");
  if (b == 1 && t.external_count() != t.string_count()) bad("leaf count differs from string count");
}

}  // namespace trieclt
