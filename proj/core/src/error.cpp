#include "trieclt/error.hpp"

namespace trieclt {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::parse_error: return "ParseError";
    case Errc::depth_cap_exceeded: return "DepthCapExceeded";
    case Errc::node_not_in_trie: return "NodeNotInTrie";
    case Errc::span_undetermined: return "SpanUndetermined";
    case Errc::strip_violation: return "StripViolation";
    case Errc::quadrature_not_converged: return "QuadratureNotConverged";
    case Errc::truncation_not_converged: return "TruncationNotConverged";
    case Errc::no_method_available: return "NoMethodAvailable";
    case Errc::ek_unavailable: return "EkUnavailable";
    case Errc::combinatorial_blowup: return "CombinatorialBlowup";
    case Errc::degenerate_variance: return "DegenerateVariance";
  }
  return "Unknown";
}

}  // namespace trieclt
