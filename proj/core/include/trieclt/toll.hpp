#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trieclt/trie.hpp"

namespace trieclt {

// Lazily computed per-node data shared by toll evaluations over one trie.
class TrieProfile {
 public:
  explicit TrieProfile(const Trie& t) : t_(&t) {}

  const Trie& trie() const noexcept { return *t_; }
  const std::vector<std::uint32_t>& ranks() const;
  const std::vector<std::uint64_t>& sizes() const;
  const std::vector<double>& log_s1() const;

 private:
  const Trie* t_;
  mutable std::optional<std::vector<std::uint32_t>> ranks_;
  mutable std::optional<std::vector<std::uint64_t>> sizes_;
  mutable std::optional<std::vector<double>> log_s1_;
};

enum class TollKind {
  zero,
  leaf,
  size,
  fringe_size,
  fringe_size_ge,
  fringe_match,
  k_protected,
  bucket_occupancy,
  log_subtrees,
  log_size,
  e0,
  e0_minus_leaf,
  e0_minus_two_leaves,
  linear,
  custom,
};

class Toll;
using TollDecomposition = std::pair<Toll, Toll>;
// phi(T^v) for node v of the profiled trie.
using TollCallback = std::function<double(const TrieProfile&, NodeId)>;

// A toll function phi on tries, phi(empty) = 0. Cheap to copy.
class Toll {
 public:
  static Toll zero();
  static Toll leaf();
  static Toll size();
  static Toll fringe_size(unsigned k);
  static Toll fringe_size_ge(unsigned k);
  static Toll fringe_match(Trie pattern);
  static Toll k_protected(unsigned k);
  static Toll bucket_occupancy(unsigned b, unsigned k);
  static Toll log_subtrees();
  static Toll log_size();
  static Toll e0();
  static Toll e0_minus_leaf();
  static Toll e0_minus_two_leaves();
  static Toll linear(std::vector<std::pair<double, Toll>> terms);
  static Toll custom(std::string name, double chi, TollCallback fn, bool bounded = false,
                     std::optional<TollDecomposition> decomposition = std::nullopt);

  TollKind kind() const noexcept;
  const std::string& name() const noexcept;
  // phi of the one-node trie.
  double chi() const noexcept;
  bool bounded() const noexcept;
  bool integer_valued() const noexcept;
  unsigned k() const noexcept;
  unsigned b() const noexcept;
  const Trie* pattern() const noexcept;
  const std::vector<std::pair<double, Toll>>& terms() const noexcept;

  // phi_+ and phi_- with phi = phi_+ - phi_- and both functionals increasing.
  std::optional<TollDecomposition> decomposition() const;

  double at(const TrieProfile& p, NodeId v) const;

  struct Impl;

 private:
  explicit Toll(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

Toll operator+(const Toll& a, const Toll& b);
Toll operator-(const Toll& a, const Toll& b);
Toll operator*(double c, const Toll& a);

// phi(T).
double eval_toll(const Toll& toll, const Trie& t);
// Phi(T) = sum over nodes of phi(T^v).
double eval_additive(const Toll& toll, const Trie& t);
double eval_additive(const Toll& toll, const TrieProfile& p);
// Phi(T) = phi(T) + sum over children of Phi(T^a), on extracted fringe tries.
double eval_additive_recursive(const Toll& toll, const Trie& t);
// Phi(T) = sum over distinct fringe shapes T' of phi(T') n_{T'}(T).
double eval_additive_by_shapes(const Toll& toll, const Trie& t);

// Parses "leaf", "size", "fringe-k=3", "fringe-ge-k=3", "fringe-match=<file>", "kprot=2",
// "bucket=b:4,k:2", "log-subtrees", "log-size", "e0", "e0-1", "e0-2".
Toll parse_toll(std::string_view spec);

}  // namespace trieclt
