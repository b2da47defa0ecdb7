#include <cmath>

#include "trieclt/error.hpp"
#include "trieclt/toll.hpp"

namespace trieclt {

const std::vector<std::uint32_t>& TrieProfile::ranks() const {
  if (!ranks_) ranks_ = trieclt::ranks(*t_);
  return *ranks_;
}

const std::vector<std::uint64_t>& TrieProfile::sizes() const {
  if (!sizes_) sizes_ = subtree_sizes(*t_);
  return *sizes_;
}

const std::vector<double>& TrieProfile::log_s1() const {
  if (!log_s1_) log_s1_ = log_root_subtrees(*t_);
  return *log_s1_;
}

struct Toll::Impl {
  TollKind kind = TollKind::zero;
  std::string name;
  double chi = 0;
  bool bounded = true;
  bool integer = true;
  unsigned k = 0;
  unsigned b = 0;
  std::optional<Trie> pattern;
  std::vector<std::pair<double, Toll>> terms;
  TollCallback fn;
  std::optional<TollDecomposition> decomposition;
};

namespace {

std::shared_ptr<Toll::Impl> make(TollKind kind, std::string name, double chi) {
  auto p = std::make_shared<Toll::Impl>();
  p->kind = kind;
  p->name = std::move(name);
  p->chi = chi;
  return p;
}

// Number of children of v carrying exactly one string.
unsigned leaf_children(const Trie& t, NodeId v) {
  const auto& n = t.node(v);
  unsigned c = 0;
  for (std::uint16_t j = 0; j < n.child_count; ++j) c += t.node(n.first_child + j).nu == 1;
  return c;
}

}  // namespace

Toll Toll::zero() { return Toll(make(TollKind::zero, "zero", 0)); }
Toll Toll::leaf() { return Toll(make(TollKind::leaf, "leaf", 1)); }
Toll Toll::size() { return Toll(make(TollKind::size, "size", 0)); }

Toll Toll::fringe_size(unsigned k) {
  require(k >= 1, "fringe size needs k >= 1");
  auto p = make(TollKind::fringe_size, "fringe-k=" + std::to_string(k), k == 1 ? 1 : 0);
  p->k = k;
  return Toll(p);
}

Toll Toll::fringe_size_ge(unsigned k) {
  require(k >= 1, "fringe size needs k >= 1");
  auto p = make(TollKind::fringe_size_ge, "fringe-ge-k=" + std::to_string(k), k <= 1 ? 1 : 0);
  p->k = k;
  return Toll(p);
}

Toll Toll::fringe_match(Trie pattern) {
  require(!pattern.empty(), "fringe pattern must be nonempty");
  require(pattern.bucket_size() == 1, "fringe pattern must be a trie");
  auto p = make(TollKind::fringe_match, "fringe-match", pattern.is_bullet() ? 1 : 0);
  p->k = static_cast<unsigned>(pattern.string_count());
  p->pattern = std::move(pattern);
  return Toll(p);
}

Toll Toll::k_protected(unsigned k) {
  require(k >= 1, "protection level needs k >= 1");
  auto p = make(TollKind::k_protected, "kprot=" + std::to_string(k), 0);
  p->k = k;
  return Toll(p);
}

Toll Toll::bucket_occupancy(unsigned b, unsigned k) {
  require(k >= 1 && k <= b, "bucket occupancy needs 1 <= k <= b");
  auto p = make(TollKind::bucket_occupancy,
                "bucket=b:" + std::to_string(b) + ",k:" + std::to_string(k), 0);
  p->b = b;
  p->k = k;
  return Toll(p);
}

Toll Toll::log_subtrees() {
  auto p = make(TollKind::log_subtrees, "log-subtrees", std::log(2.0));
  p->integer = false;
  return Toll(p);
}

Toll Toll::log_size() {
  auto p = make(TollKind::log_size, "log-size", 0);
  p->integer = false;
  p->bounded = false;
  return Toll(p);
}

Toll Toll::e0() { return Toll(make(TollKind::e0, "e0", 1)); }
Toll Toll::e0_minus_leaf() { return Toll(make(TollKind::e0_minus_leaf, "e0-1", 0)); }
Toll Toll::e0_minus_two_leaves() { return Toll(make(TollKind::e0_minus_two_leaves, "e0-2", -1)); }

Toll Toll::linear(std::vector<std::pair<double, Toll>> terms) {
  auto p = make(TollKind::linear, "", 0);
  for (const auto& [c, t] : terms) {
    p->chi += c * t.chi();
    p->bounded = p->bounded && t.bounded();
    p->integer = p->integer && t.integer_valued() && c == std::round(c);
    if (!p->name.empty()) p->name += c < 0 ? " - " : " + ";
    else if (c < 0) p->name += "-";
    double m = std::abs(c);
    if (m != 1) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g*", m);
      p->name += buf;
    }
    p->name += t.name();
  }
  if (p->name.empty()) p->name = "zero";
  p->terms = std::move(terms);
  return Toll(p);
}

Toll Toll::custom(std::string name, double chi, TollCallback fn, bool bounded,
                  std::optional<TollDecomposition> decomposition) {
  require(static_cast<bool>(fn), "custom toll needs a callback");
  auto p = make(TollKind::custom, std::move(name), chi);
  p->fn = std::move(fn);
  p->bounded = bounded;
  p->integer = false;
  p->decomposition = std::move(decomposition);
  return Toll(p);
}

TollKind Toll::kind() const noexcept { return impl_->kind; }
const std::string& Toll::name() const noexcept { return impl_->name; }
double Toll::chi() const noexcept { return impl_->chi; }
bool Toll::bounded() const noexcept { return impl_->bounded; }
bool Toll::integer_valued() const noexcept { return impl_->integer; }
unsigned Toll::k() const noexcept { return impl_->k; }
unsigned Toll::b() const noexcept { return impl_->b; }
const Trie* Toll::pattern() const noexcept { return impl_->pattern ? &*impl_->pattern : nullptr; }
const std::vector<std::pair<double, Toll>>& Toll::terms() const noexcept { return impl_->terms; }

std::optional<TollDecomposition> Toll::decomposition() const {
  const auto& i = *impl_;
  auto self = [this] { return TollDecomposition{*this, Toll::zero()}; };
  switch (i.kind) {
    case TollKind::zero:
    case TollKind::leaf:
    case TollKind::size:
    case TollKind::fringe_size_ge:
    case TollKind::log_subtrees:
    case TollKind::log_size:
    case TollKind::e0:
    case TollKind::e0_minus_leaf:
      return self();
    case TollKind::fringe_size:
      return TollDecomposition{fringe_size_ge(i.k), fringe_size_ge(i.k + 1)};
    case TollKind::fringe_match: {
      Toll above = fringe_size_ge(i.k + 1);
      return TollDecomposition{*this + above, above};
    }
    case TollKind::k_protected: {
      Toll leaves = static_cast<double>(i.k) * leaf();
      return TollDecomposition{*this + leaves, leaves};
    }
    case TollKind::bucket_occupancy:
      return TollDecomposition{*this + leaf(), leaf()};
    case TollKind::e0_minus_two_leaves:
      return TollDecomposition{e0(), 2.0 * leaf()};
    case TollKind::linear:
    case TollKind::custom:
      return i.decomposition;
  }
  return std::nullopt;
}

double Toll::at(const TrieProfile& p, NodeId v) const {
  const Trie& t = p.trie();
  if (v >= t.size()) return 0;
  const auto& n = t.node(v);
  const auto& i = *impl_;
  switch (i.kind) {
    case TollKind::zero: return 0;
    case TollKind::leaf: return n.nu == 1 ? 1 : 0;
    case TollKind::size: return t.is_internal(v) ? 1 : 0;
    case TollKind::fringe_size: return n.nu == i.k ? 1 : 0;
    case TollKind::fringe_size_ge: return n.nu >= i.k ? 1 : 0;
    case TollKind::fringe_match:
      return n.nu == i.k && p.sizes()[v] == i.pattern->size() && fringe_equals(t, v, *i.pattern) ? 1
                                                                                                : 0;
    case TollKind::k_protected: return p.ranks()[v] >= i.k ? 1 : 0;
    case TollKind::bucket_occupancy: {
      if (n.nu <= i.b) return 0;
      unsigned c = 0;
      for (std::uint16_t j = 0; j < n.child_count; ++j) c += t.node(n.first_child + j).nu == i.k;
      return c;
    }
    case TollKind::log_subtrees: return std::log1p(std::exp(-p.log_s1()[v]));
    case TollKind::log_size: return std::log(static_cast<double>(p.sizes()[v]));
    case TollKind::e0: return n.nu == 1 ? 1.0 : double(leaf_children(t, v));
    case TollKind::e0_minus_leaf: return n.nu == 1 ? 0.0 : double(leaf_children(t, v));
    case TollKind::e0_minus_two_leaves: return n.nu == 1 ? -1.0 : double(leaf_children(t, v));
    case TollKind::linear: {
      double acc = 0;
      for (const auto& [c, term] : i.terms) acc += c * term.at(p, v);
      return acc;
    }
    case TollKind::custom: return i.fn(p, v);
  }
  return 0;
}

Toll operator+(const Toll& a, const Toll& b) { return Toll::linear({{1.0, a}, {1.0, b}}); }
Toll operator-(const Toll& a, const Toll& b) { return Toll::linear({{1.0, a}, {-1.0, b}}); }
Toll operator*(double c, const Toll& a) { return Toll::linear({{c, a}}); }

}  // namespace trieclt
