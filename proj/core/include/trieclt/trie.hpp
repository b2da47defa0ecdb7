#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trieclt/prob_model.hpp"
#include "trieclt/string_source.hpp"

namespace trieclt {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = ~NodeId{0};

using Path = std::vector<Letter>;

struct TrieNode {
  NodeId parent = kNoNode;
  NodeId first_child = kNoNode;
  std::uint32_t depth = 0;
  std::uint16_t child_count = 0;
  Letter letter = 0;     // letter on the edge from the parent; 0 for the root
  std::uint64_t nu = 0;  // number of generating strings with this prefix
  std::uint64_t lo = 0;  // first slot of this node's generators in the permutation
};

struct NodeSpec {
  Path path;
  std::uint64_t nu = 0;
};

// A trie (bucket size 1) or bucket trie, stored as a flat array in canonical BFS order
// (by depth, then lexicographically). Children of a node are contiguous. Immutable.
class Trie {
 public:
  Trie() = default;
  Trie(std::size_t alphabet_size, std::uint32_t bucket_size = 1);

  static Trie bullet(std::size_t alphabet_size);
  // Builds from an explicit prefix-closed node list; order of the list is irrelevant.
  static Trie from_node_list(std::size_t alphabet_size, std::vector<NodeSpec> nodes,
                             std::uint32_t bucket_size = 1);

  std::size_t alphabet_size() const noexcept { return r_; }
  std::uint32_t bucket_size() const noexcept { return b_; }
  bool empty() const noexcept { return nodes_.empty(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t internal_count() const noexcept { return internal_count_; }
  std::size_t external_count() const noexcept { return nodes_.size() - internal_count_; }
  std::uint64_t string_count() const noexcept { return nodes_.empty() ? 0 : nodes_[0].nu; }
  bool is_bullet() const noexcept { return nodes_.size() == 1 && nodes_[0].nu == 1; }

  static constexpr NodeId root() noexcept { return 0; }
  const TrieNode& node(NodeId v) const { return nodes_.at(v); }
  std::span<const TrieNode> nodes() const noexcept { return nodes_; }
  bool is_internal(NodeId v) const { return nodes_[v].nu > b_; }
  bool is_leaf(NodeId v) const { return nodes_[v].child_count == 0; }

  std::optional<NodeId> child(NodeId v, Letter a) const;
  std::optional<NodeId> find(std::span<const Letter> path) const;
  Path path(NodeId v) const;

  // Generating strings, when the trie was built from strings.
  const StringSet* strings() const noexcept { return strings_.get(); }
  std::span<const std::uint64_t> generators(NodeId v) const;
  // nu for any string alpha, including ones outside the trie (needs the strings when
  // alpha runs below a leaf).
  std::uint64_t nu_of(std::span<const Letter> path) const;

  // Structural equality as ordered labelled trees with counts; generators are ignored.
  friend bool operator==(const Trie& a, const Trie& b);

 private:
  friend class TrieBuilder;
  std::size_t r_ = 2;
  std::uint32_t b_ = 1;
  std::vector<TrieNode> nodes_;
  std::vector<std::uint64_t> order_;
  std::shared_ptr<const StringSet> strings_;
  std::size_t internal_count_ = 0;
};

Trie build_trie(const StringSet& strings, std::size_t alphabet_size);
Trie bucket_trie(const StringSet& strings, std::size_t alphabet_size, std::uint32_t b);
// Grows every bucket of a bucket trie into a trie over its strings.
Trie grow_buckets(const Trie& bucket);

Trie sample_fixed(std::uint64_t n, const StringSource& src);

struct PoissonSample {
  Trie trie;
  std::uint64_t count = 0;
};
PoissonSample sample_poisson(double lambda, const StringSource& src);

Trie fringe(const Trie& t, NodeId v);
Trie fringe(const Trie& t, std::span<const Letter> path);
// T^alpha, except that a single string below alpha gives the one-node trie.
Trie modified_fringe(const Trie& t, std::span<const Letter> path);

std::vector<std::uint32_t> ranks(const Trie& t);
std::uint32_t rank(const Trie& t, std::span<const Letter> path);
std::uint32_t height(const Trie& t);
// Total number of nodes in each fringe tree T^v.
std::vector<std::uint64_t> subtree_sizes(const Trie& t);

// T^v == T' as ordered labelled trees.
bool fringe_equals(const Trie& t, NodeId v, const Trie& other);
std::uint64_t count_fringe_equal(const Trie& t, const Trie& other);

struct SubtreeCounts {
  bool exact = false;  // s and s1 valid; otherwise only the logs are
  std::uint64_t s = 0;
  std::uint64_t s1 = 0;
  double log_s = 0;
  double log_s1 = 0;
};
SubtreeCounts count_subtrees(const Trie& t);
// ln s1(T^v) for every node.
std::vector<double> log_root_subtrees(const Trie& t);

struct StringDelta {
  enum class Kind { new_leaf, leaf_to_path } kind = Kind::new_leaf;
  Path path;                  // the new leaf, or the former leaf turned into a path
  std::uint32_t new_internal = 0;  // internal nodes created
};

struct AddResult {
  Trie trie;
  StringDelta delta;
};
AddResult add_string(const Trie& t, LetterStream stream);
// Adds the next unused stream of the trie's source.
AddResult add_random_string(const Trie& t);

// Throws std::logic_error describing the first violated structural invariant.
void check_invariants(const Trie& t);

std::string to_json(const Trie& t);
Trie trie_from_json(std::string_view json);
std::string path_to_string(std::span<const Letter> path);
Path path_from_string(std::string_view s);

}  // namespace trieclt
