#pragma once

#include <ostream>

namespace rankdyn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Parses arguments and runs one subcommand. Never throws: configuration and
/// usage errors return kExitConfig, every other failure kExitRuntime.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rankdyn::cli
