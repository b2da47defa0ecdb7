#include "trieclt/string_source.hpp"

#include <cmath>
#include <random>

#include "trieclt/error.hpp"

namespace trieclt {

StringSource::StringSource(ProbModel model, std::uint64_t seed) {
  std::vector<double> c;
  double acc = 0;
  for (double p : model.probs()) {
    acc += p;
    c.push_back(acc);
  }
  c.back() = 1.0;
  impl_ = std::make_shared<const Impl>(Impl{std::move(model), seed, std::move(c)});
}

StringSource StringSource::derive(std::uint64_t key) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->seed = mix64(impl_->seed ^ 0xd1b54a32d192ed03ULL, key);
  return StringSource(std::move(impl));
}

std::uint64_t StringSource::draw_poisson(double lambda) const {
  require(lambda > 0 && std::isfinite(lambda), "Poisson parameter must be positive");
  std::mt19937_64 gen(mix64(impl_->seed, 0x706f6973736f6eULL));
  std::poisson_distribution<std::uint64_t> po(lambda);
  return po(gen);
}

LetterStream LetterStream::parse(std::string_view letters) {
  std::vector<Letter> v;
  v.reserve(letters.size());
  for (char ch : letters) {
    if (ch >= '0' && ch <= '9') v.push_back(static_cast<Letter>(ch - '0'));
    else if (ch >= 'a' && ch <= 'z') v.push_back(static_cast<Letter>(ch - 'a' + 10));
    else fail(Errc::parse_error, "bad letter '" + std::string(1, ch) + "' in string");
  }
  return LetterStream(std::move(v));
}

Letter LetterStream::at(std::uint32_t depth) const {
  if (depth < prefix_.size()) return prefix_[depth];
  if (!src_) fail(Errc::invalid_argument, "finite string read past its end (strings not distinguishable)");
  return src_->letter(stream_, depth);
}

StringSet StringSet::lazy(StringSource src, std::uint64_t count, std::uint64_t first) {
  StringSet s;
  s.src_ = std::move(src);
  s.first_ = first;
  s.lazy_count_ = count;
  s.count_ = count;
  return s;
}

StringSet StringSet::explicit_streams(std::vector<LetterStream> streams) {
  StringSet s;
  s.count_ = streams.size();
  s.extra_ = std::move(streams);
  return s;
}

StringSet StringSet::with(LetterStream extra) const {
  StringSet s = *this;
  s.extra_.push_back(std::move(extra));
  ++s.count_;
  return s;
}

std::optional<LetterStream> StringSet::next_stream() const {
  if (!src_) return std::nullopt;
  return LetterStream(*src_, first_ + lazy_count_ + extra_.size());
}

}  // namespace trieclt
