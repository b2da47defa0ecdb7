#pragma once

#include <string>

#include "trieclt/prob_model.hpp"

namespace trieclt::cli {

// Reads a model file ({"probs": [...], "declared_span": d, "label": "..."}; probabilities are
// decimals or {"num": a, "den": b} objects). "symR" without a file names the symmetric model.
ProbModel load_model(const std::string& path_or_name);
ProbModel parse_model(const std::string& json_text, const std::string& fallback_label = {});

}  // namespace trieclt::cli
