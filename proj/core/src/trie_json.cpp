#include <json.hpp>

#include "trieclt/error.hpp"
#include "trieclt/trie.hpp"

namespace trieclt {

std::string path_to_string(std::span<const Letter> path) {
  static constexpr char digits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string s;
  s.reserve(path.size());
  for (Letter a : path) {
    if (a >= 36) fail(Errc::invalid_argument, "letters beyond 35 have no path encoding");
    s.push_back(digits[a]);
  }
  return s;
}

Path path_from_string(std::string_view s) {
  Path p;
  p.reserve(s.size());
  for (char ch : s) {
    if (ch >= '0' && ch <= '9') p.push_back(static_cast<Letter>(ch - '0'));
    else if (ch >= 'a' && ch <= 'z') p.push_back(static_cast<Letter>(ch - 'a' + 10));
    else fail(Errc::parse_error, std::string("bad path character '") + ch + "'");
  }
  return p;
}

std::string to_json(const Trie& t) {
  nlohmann::json j;
  j["alphabet_size"] = t.alphabet_size();
  if (t.bucket_size() != 1) j["bucket_size"] = t.bucket_size();
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (NodeId v = 0; v < t.size(); ++v) {
    nodes.push_back({{"path", path_to_string(t.path(v))},
                     {"nu", t.node(v).nu},
                     {"kind", t.is_internal(v) ? "internal" : "external"}});
  }
  return j.dump();
}

Trie trie_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("trie JSON: ") + e.what());
  }
  try {
    const std::size_t r = j.at("alphabet_size").get<std::size_t>();
    const std::uint32_t b = j.value("bucket_size", 1u);
    std::vector<NodeSpec> specs;
    for (const auto& n : j.at("nodes")) {
      NodeSpec s{path_from_string(n.at("path").get<std::string>()), n.at("nu").get<std::uint64_t>()};
      if (n.contains("kind")) {
        const auto kind = n["kind"].get<std::string>();
        const bool internal = s.nu > b;
        if ((kind == "internal") != internal || (kind != "internal" && kind != "external"))
          fail(Errc::parse_error, "node kind disagrees with its count at '" +
                                      n["path"].get<std::string>() + "'");
      }
      specs.push_back(std::move(s));
    }
    Trie t = Trie::from_node_list(r, std::move(specs), b);
    try {
      check_invariants(t);
    } catch (const std::logic_error& e) {
      fail(Errc::parse_error, std::string("trie JSON is not a trie: ") + e.what());
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("trie JSON: ") + e.what());
  }
}

}  // namespace trieclt
