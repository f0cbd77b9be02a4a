#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reqforge::interface {

/// Exit codes of the reqforge command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailed = 2;

/// Entry point of the reqforge command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace reqforge::interface
