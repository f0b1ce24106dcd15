#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace capalarm::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInvalidInput = 2;
inline constexpr int kDegenerate = 3;
inline constexpr int kValidationFailed = 4;

/// Runs the command line (args excludes the program name). Primary output
/// goes to `out` unless --out is given; messages go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace capalarm::cli
