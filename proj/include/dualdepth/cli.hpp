#pragma once

// Command-line front end. Reports go to `out` as JSON, diagnostics to `err`.
// Exit codes: 0 success/pass, 1 not found/fail, 2 input error.

#include <iosfwd>
#include <span>
#include <string>

namespace dualdepth {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInput = 2;

/// args excludes the program name.
int cli_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace dualdepth
