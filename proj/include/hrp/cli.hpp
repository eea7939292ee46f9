#pragma once

#include <iosfwd>

namespace hrp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `hrp` tool. argv[0] is the program name. Returns the
/// process exit code: 0 success, 2 usage or validation error, 1 runtime error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hrp::cli
