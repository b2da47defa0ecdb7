#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trieclt {

enum class Errc {
  invalid_argument,
  parse_error,
  depth_cap_exceeded,
  node_not_in_trie,
  span_undetermined,
  strip_violation,
  quadrature_not_converged,
  truncation_not_converged,
  no_method_available,
  ek_unavailable,
  combinatorial_blowup,
  degenerate_variance,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Carries the best value reached so far along with the failure.
class NumericError : public Error {
 public:
  NumericError(Errc code, const std::string& what, double achieved_error)
      : Error(code, what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::invalid_argument, what);
}

}  // namespace trieclt
