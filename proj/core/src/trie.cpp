#include "trieclt/trie.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "trieclt/error.hpp"

namespace trieclt {

class TrieBuilder {
 public:
  // BFS construction over generator ids; a node is split while nu > b.
  template <class LetterFn>
  static Trie build(std::size_t r, std::uint32_t b, std::uint64_t n, LetterFn&& letter_of,
                    std::uint32_t start_depth = 0) {
    require(r >= 2 && r <= 65535, "alphabet size out of range");
    require(b >= 1, "bucket size must be at least 1");
    Trie t(r, b);
    if (n == 0) return t;
    t.order_.resize(n);
    std::iota(t.order_.begin(), t.order_.end(), std::uint64_t{0});
    t.nodes_.push_back(TrieNode{kNoNode, kNoNode, 0, 0, 0, n, 0});

    std::vector<std::uint64_t> scratch;
    std::vector<Letter> letters;
    std::vector<std::uint64_t> count(r, 0);
    std::vector<std::uint64_t> offset(r, 0);
    for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
      const TrieNode cur = t.nodes_[i];
      if (cur.nu <= b) continue;
      ++t.internal_count_;
      const std::uint32_t d = start_depth + cur.depth;
      if (d >= kMaxDepth)
        fail(Errc::depth_cap_exceeded,
             "strings agree on " + std::to_string(kMaxDepth) + " letters");
      auto ids = std::span(t.order_).subspan(cur.lo, cur.nu);
      letters.resize(ids.size());
      for (std::size_t j = 0; j < ids.size(); ++j) {
        Letter a = letter_of(ids[j], d);
        if (a >= r) fail(Errc::invalid_argument, "letter outside the alphabet");
        letters[j] = a;
        ++count[a];
      }
      std::uint64_t acc = 0;
      for (std::size_t a = 0; a < r; ++a) {
        offset[a] = acc;
        acc += count[a];
      }
      scratch.resize(ids.size());
      for (std::size_t j = 0; j < ids.size(); ++j) scratch[offset[letters[j]]++] = ids[j];
      std::copy(scratch.begin(), scratch.end(), ids.begin());

      const auto first = static_cast<NodeId>(t.nodes_.size());
      std::uint16_t kids = 0;
      std::uint64_t lo = cur.lo;
      for (std::size_t a = 0; a < r; ++a) {
        if (count[a] == 0) continue;
        t.nodes_.push_back(TrieNode{static_cast<NodeId>(i), kNoNode, cur.depth + 1, 0,
                                    static_cast<Letter>(a), count[a], lo});
        lo += count[a];
        ++kids;
        count[a] = 0;
      }
      t.nodes_[i].first_child = first;
      t.nodes_[i].child_count = kids;
      if (t.nodes_.size() >= kNoNode) fail(Errc::invalid_argument, "trie too large");
    }
    return t;
  }

  static Trie& set_strings(Trie& t, std::shared_ptr<const StringSet> s) {
    t.strings_ = std::move(s);
    return t;
  }

  static Trie from_sorted(std::size_t r, std::uint32_t b, std::vector<NodeSpec>& specs);
  static Trie extract(const Trie& t, NodeId v);
};

Trie::Trie(std::size_t alphabet_size, std::uint32_t bucket_size)
    : r_(alphabet_size), b_(bucket_size) {
  require(r_ >= 2 && r_ <= 65535, "alphabet size out of range");
  require(b_ >= 1, "bucket size must be at least 1");
}

Trie Trie::bullet(std::size_t alphabet_size) {
  Trie t(alphabet_size);
  t.nodes_.push_back(TrieNode{kNoNode, kNoNode, 0, 0, 0, 1, 0});
  return t;
}

namespace {

bool canonical_less(const Path& a, const Path& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

Trie TrieBuilder::from_sorted(std::size_t r, std::uint32_t b, std::vector<NodeSpec>& specs) {
  Trie t(r, b);
  if (specs.empty()) return t;
  std::sort(specs.begin(), specs.end(),
            [](const NodeSpec& x, const NodeSpec& y) { return canonical_less(x.path, y.path); });
  if (!specs[0].path.empty()) fail(Errc::parse_error, "node list lacks the root");
  std::map<Path, NodeId> index;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    if (i > 0 && specs[i - 1].path == s.path) fail(Errc::parse_error, "duplicate node");
    TrieNode node{kNoNode, kNoNode, static_cast<std::uint32_t>(s.path.size()), 0, 0, s.nu, 0};
    if (!s.path.empty()) {
      Path parent(s.path.begin(), s.path.end() - 1);
      auto it = index.find(parent);
      if (it == index.end()) fail(Errc::parse_error, "node list is not prefix-closed");
      node.parent = it->second;
      node.letter = s.path.back();
      if (node.letter >= r) fail(Errc::parse_error, "letter outside the alphabet");
      auto& p = t.nodes_[node.parent];
      if (p.child_count == 0) p.first_child = static_cast<NodeId>(i);
      ++p.child_count;
    }
    if (s.nu > b) ++t.internal_count_;
    index.emplace(s.path, static_cast<NodeId>(i));
    t.nodes_.push_back(node);
  }
  return t;
}

Trie Trie::from_node_list(std::size_t alphabet_size, std::vector<NodeSpec> nodes,
                          std::uint32_t bucket_size) {
  return TrieBuilder::from_sorted(alphabet_size, bucket_size, nodes);
}

std::optional<NodeId> Trie::child(NodeId v, Letter a) const {
  const auto& n = nodes_.at(v);
  for (std::uint16_t j = 0; j < n.child_count; ++j) {
    NodeId c = n.first_child + j;
    if (nodes_[c].letter == a) return c;
    if (nodes_[c].letter > a) break;
  }
  return std::nullopt;
}

std::optional<NodeId> Trie::find(std::span<const Letter> path) const {
  if (nodes_.empty()) return std::nullopt;
  NodeId v = root();
  for (Letter a : path) {
    auto c = child(v, a);
    if (!c) return std::nullopt;
    v = *c;
  }
  return v;
}

Path Trie::path(NodeId v) const {
  Path p(nodes_.at(v).depth);
  for (NodeId u = v; nodes_[u].parent != kNoNode; u = nodes_[u].parent)
    p[nodes_[u].depth - 1] = nodes_[u].letter;
  return p;
}

std::span<const std::uint64_t> Trie::generators(NodeId v) const {
  if (order_.empty()) return {};
  const auto& n = nodes_.at(v);
  return std::span(order_).subspan(n.lo, n.nu);
}

std::uint64_t Trie::nu_of(std::span<const Letter> path) const {
  if (nodes_.empty()) return 0;
  NodeId v = root();
  std::size_t d = 0;
  for (; d < path.size(); ++d) {
    auto c = child(v, path[d]);
    if (!c) break;
    v = *c;
  }
  if (d == path.size()) return nodes_[v].nu;
  if (!is_leaf(v)) return 0;
  if (!strings_) fail(Errc::invalid_argument, "nu below a leaf needs the generating strings");
  std::uint64_t count = 0;
  for (std::uint64_t id : generators(v)) {
    bool match = true;
    for (std::size_t e = d; e < path.size() && match; ++e)
      match = strings_->letter(id, static_cast<std::uint32_t>(e)) == path[e];
    count += match;
  }
  return count;
}

bool operator==(const Trie& a, const Trie& b) {
  if (a.r_ != b.r_ || a.b_ != b.b_ || a.nodes_.size() != b.nodes_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const auto& x = a.nodes_[i];
    const auto& y = b.nodes_[i];
    if (x.parent != y.parent || x.letter != y.letter || x.child_count != y.child_count ||
        x.nu != y.nu || x.depth != y.depth)
      return false;
  }
  return true;
}

Trie build_trie(const StringSet& strings, std::size_t alphabet_size) {
  return bucket_trie(strings, alphabet_size, 1);
}

Trie bucket_trie(const StringSet& strings, std::size_t alphabet_size, std::uint32_t b) {
  auto owned = std::make_shared<const StringSet>(strings);
  const StringSet& s = *owned;
  Trie t = TrieBuilder::build(alphabet_size, b, s.size(),
                              [&s](std::uint64_t id, std::uint32_t d) { return s.letter(id, d); });
  return TrieBuilder::set_strings(t, std::move(owned));
}

Trie grow_buckets(const Trie& bucket) {
  if (bucket.bucket_size() == 1) return bucket;
  const StringSet* s = bucket.strings();
  if (!s) fail(Errc::invalid_argument, "growing buckets needs the generating strings");
  std::vector<NodeSpec> specs;
  specs.reserve(bucket.size());
  for (NodeId v = 0; v < bucket.size(); ++v) {
    Path p = bucket.path(v);
    const auto& n = bucket.node(v);
    if (n.nu >= 2 && bucket.is_leaf(v)) {
      auto ids = bucket.generators(v);
      Trie sub = TrieBuilder::build(
          bucket.alphabet_size(), 1, ids.size(),
          [&](std::uint64_t j, std::uint32_t d) { return s->letter(ids[j], d); }, n.depth);
      for (NodeId u = 0; u < sub.size(); ++u) {
        Path q = p;
        Path rel = sub.path(u);
        q.insert(q.end(), rel.begin(), rel.end());
        specs.push_back(NodeSpec{std::move(q), sub.node(u).nu});
      }
    } else {
      specs.push_back(NodeSpec{std::move(p), n.nu});
    }
  }
  return Trie::from_node_list(bucket.alphabet_size(), std::move(specs), 1);
}

Trie sample_fixed(std::uint64_t n, const StringSource& src) {
  return build_trie(StringSet::lazy(src, n), src.model().size());
}

PoissonSample sample_poisson(double lambda, const StringSource& src) {
  std::uint64_t n = src.draw_poisson(lambda);
  return {sample_fixed(n, src), n};
}

Trie TrieBuilder::extract(const Trie& t, NodeId v) {
  Trie out(t.r_, t.b_);
  if (v >= t.nodes_.size()) return out;
  const std::uint32_t base = t.nodes_[v].depth;
  std::vector<NodeId> src{v};
  auto root = t.nodes_[v];
  out.nodes_.push_back(TrieNode{kNoNode, kNoNode, 0, 0, 0, root.nu, 0});
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto& n = t.nodes_[src[i]];
    if (n.nu > t.b_) ++out.internal_count_;
    if (n.child_count == 0) continue;
    out.nodes_[i].first_child = static_cast<NodeId>(out.nodes_.size());
    out.nodes_[i].child_count = n.child_count;
    for (std::uint16_t j = 0; j < n.child_count; ++j) {
      NodeId c = n.first_child + j;
      const auto& cn = t.nodes_[c];
      out.nodes_.push_back(
          TrieNode{static_cast<NodeId>(i), kNoNode, cn.depth - base, 0, cn.letter, cn.nu, 0});
      src.push_back(c);
    }
  }
  return out;
}

Trie fringe(const Trie& t, NodeId v) {
  if (v >= t.size()) return Trie(t.alphabet_size(), t.bucket_size());
  if (v == Trie::root()) return t;
  return TrieBuilder::extract(t, v);
}

Trie fringe(const Trie& t, std::span<const Letter> path) {
  auto v = t.find(path);
  if (!v) return Trie(t.alphabet_size(), t.bucket_size());
  return fringe(t, *v);
}

Trie modified_fringe(const Trie& t, std::span<const Letter> path) {
  auto v = t.find(path);
  if (v) {
    if (t.node(*v).nu == 1) return Trie::bullet(t.alphabet_size());
    return fringe(t, *v);
  }
  if (t.nu_of(path) == 1) return Trie::bullet(t.alphabet_size());
  return Trie(t.alphabet_size(), t.bucket_size());
}

}  // namespace trieclt
