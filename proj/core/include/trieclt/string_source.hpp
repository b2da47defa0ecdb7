#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "trieclt/prob_model.hpp"

namespace trieclt {

inline constexpr std::uint32_t kMaxDepth = 4096;

// splitmix64 finaliser; the basis of every counter-based draw below.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

// Infinite i.i.d. letter streams indexed by (seed, stream). Letter d of stream i is a pure
// function of (seed, i, d), so any subset of streams can be read in any order or thread.
class StringSource {
 public:
  StringSource(ProbModel model, std::uint64_t seed);

  const ProbModel& model() const noexcept { return impl_->model; }
  std::uint64_t seed() const noexcept { return impl_->seed; }

  Letter letter(std::uint64_t stream, std::uint32_t depth) const noexcept {
    std::uint64_t h = mix64(mix64(impl_->seed, stream), depth);
    double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    const auto& c = impl_->cumulative;
    Letter a = 0;
    const auto last = static_cast<Letter>(c.size() - 1);
    while (a < last && u >= c[a]) ++a;
    return a;
  }

  // Independent source for a sub-experiment (trial, cell, ...).
  StringSource derive(std::uint64_t key) const;

  // Po(lambda) draw keyed on this source only; repeated calls agree.
  std::uint64_t draw_poisson(double lambda) const;

 private:
  struct Impl {
    ProbModel model;
    std::uint64_t seed;
    std::vector<double> cumulative;
  };
  explicit StringSource(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// One generating string: an explicit prefix, optionally continued by a source stream.
// Without a continuation the string is finite and reading past its end is an error.
class LetterStream {
 public:
  LetterStream() = default;
  explicit LetterStream(std::vector<Letter> prefix) : prefix_(std::move(prefix)) {}
  LetterStream(StringSource src, std::uint64_t stream) : src_(std::move(src)), stream_(stream) {}
  LetterStream(std::vector<Letter> prefix, StringSource src, std::uint64_t stream)
      : prefix_(std::move(prefix)), src_(std::move(src)), stream_(stream) {}

  // Parses "0110" (base-36 digits) into a finite stream.
  static LetterStream parse(std::string_view letters);

  Letter at(std::uint32_t depth) const;
  bool finite() const noexcept { return !src_.has_value(); }
  std::size_t prefix_length() const noexcept { return prefix_.size(); }

 private:
  std::vector<Letter> prefix_;
  std::optional<StringSource> src_;
  std::uint64_t stream_ = 0;
};

// The generating strings of a trie: either streams first..first+count-1 of a source, or an
// explicit list.
class StringSet {
 public:
  StringSet() = default;
  static StringSet lazy(StringSource src, std::uint64_t count, std::uint64_t first = 0);
  static StringSet explicit_streams(std::vector<LetterStream> streams);

  std::uint64_t size() const noexcept { return count_; }
  Letter letter(std::uint64_t i, std::uint32_t depth) const {
    if (i < lazy_count_) return src_->letter(first_ + i, depth);
    return extra_[i - lazy_count_].at(depth);
  }

  // A copy with one more string appended.
  StringSet with(LetterStream extra) const;
  // Next unused stream of the underlying source, if lazily generated.
  std::optional<LetterStream> next_stream() const;

 private:
  std::optional<StringSource> src_;
  std::uint64_t first_ = 0;
  std::uint64_t lazy_count_ = 0;
  std::vector<LetterStream> extra_;
  std::uint64_t count_ = 0;
};

}  // namespace trieclt
