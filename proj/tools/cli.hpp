#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fusion::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInvalid = 1;
inline constexpr int kParseError = 2;
inline constexpr int kUnsupported = 3;
inline constexpr int kTooLarge = 4;

// Runs one fwtool invocation; `args` excludes the program name. Standard
// input and output are only used when no --input / --output is given.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace fusion::cli
