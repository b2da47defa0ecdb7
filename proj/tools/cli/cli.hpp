#pragma once

#include <ostream>

namespace trieclt::cli {

// Exit codes: 0 success, 1 execution or usage error, 2 statistical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitStatFail = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trieclt::cli
