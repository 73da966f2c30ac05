#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace logsift {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitEndpoint = 3;

/// Entry point of the `logsift` command. `args` excludes the program name.
/// Input `-` (or no input) reads `in`; data goes to `out` unless `--out` is
/// given, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace logsift
