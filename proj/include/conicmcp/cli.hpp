#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conicmcp {

// Exit codes: 0 verdict passed, 1 verdict failed, 2 error (document on err).
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

// Runs one CLI invocation; args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conicmcp
