#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "trieclt/prob_model.hpp"
#include "trieclt/string_source.hpp"
#include "trieclt/trie.hpp"

namespace trieclt::testing {

inline Trie trie_of(std::initializer_list<const char*> strings, std::size_t r = 2) {
  std::vector<LetterStream> s;
  for (const char* x : strings) s.push_back(LetterStream::parse(x));
  return build_trie(StringSet::explicit_streams(std::move(s)), r);
}

inline ProbModel p37() { return ProbModel::from_rationals({{3, 10}, {7, 10}}, std::nullopt, "p37"); }
inline ProbModel quarter() { return ProbModel::from_rationals({{1, 4}, {3, 4}}, std::nullopt, "quarter"); }
inline ProbModel sym2() { return ProbModel::symmetric(2); }

// A spread of small random tries: n cycles through 0..max_n, models alternate.
inline std::vector<Trie> random_tries(std::size_t count, std::uint64_t max_n, std::uint64_t seed) {
  std::vector<Trie> out;
  const ProbModel models[] = {sym2(), p37(), ProbModel::symmetric(3)};
  for (std::size_t i = 0; i < count; ++i) {
    StringSource src(models[i % 3], seed);
    out.push_back(sample_fixed(i % (max_n + 1), src.derive(i)));
  }
  return out;
}

}  // namespace trieclt::testing
