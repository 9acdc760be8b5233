#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace primecvp::cli {

/// Exit codes besides 0 and the CLI11 usage codes.
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitRuntimeError = 2;
inline constexpr int kExitConfigError = 3;

int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace primecvp::cli
