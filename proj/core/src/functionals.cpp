#include <map>

#include "trieclt/toll.hpp"

namespace trieclt {

double eval_toll(const Toll& toll, const Trie& t) {
  if (t.empty()) return 0;
  TrieProfile p(t);
  return toll.at(p, Trie::root());
}

double eval_additive(const Toll& toll, const TrieProfile& p) {
  double acc = 0;
  const auto n = static_cast<NodeId>(p.trie().size());
  for (NodeId v = 0; v < n; ++v) acc += toll.at(p, v);
  return acc;
}

double eval_additive(const Toll& toll, const Trie& t) { return eval_additive(toll, TrieProfile(t)); }

double eval_additive_recursive(const Toll& toll, const Trie& t) {
  if (t.empty()) return 0;
  double acc = eval_toll(toll, t);
  const auto& root = t.node(Trie::root());
  for (std::uint16_t j = 0; j < root.child_count; ++j)
    acc += eval_additive_recursive(toll, fringe(t, static_cast<NodeId>(root.first_child + j)));
  return acc;
}

namespace {

// Serialises T^v so that equal fringe tries get equal keys.
void shape_key(const Trie& t, NodeId v, std::string& out) {
  const auto& n = t.node(v);
  out += '(';
  out += std::to_string(n.nu);
  for (std::uint16_t j = 0; j < n.child_count; ++j) {
    out += ' ';
    out += std::to_string(t.node(n.first_child + j).letter);
    shape_key(t, n.first_child + j, out);
  }
  out += ')';
}

}  // namespace

double eval_additive_by_shapes(const Toll& toll, const Trie& t) {
  std::map<std::string, NodeId> shapes;
  for (NodeId v = 0; v < t.size(); ++v) {
    std::string key;
    shape_key(t, v, key);
    shapes.emplace(std::move(key), v);
  }
  double acc = 0;
  for (const auto& [key, v] : shapes) {
    Trie shape = fringe(t, v);
    acc += eval_toll(toll, shape) * static_cast<double>(count_fringe_equal(t, shape));
  }
  return acc;
}

}  // namespace trieclt
