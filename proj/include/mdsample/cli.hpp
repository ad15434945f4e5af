#pragma once

#include <iosfwd>

namespace mdsample {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfigError = 2;

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 on success or a passing verdict, 1 on a failed or inconclusive check,
/// 2 on invalid configuration or arguments.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mdsample
