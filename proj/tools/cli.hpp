#ifndef SAPA_TOOLS_CLI_HPP
#define SAPA_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace sapa::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

/// CSV schema tag written as the first line of every CSV file.
inline constexpr const char* kSchemaLine = "# sapa-rrm v1";

/// Entry point behind the sapa_rrm binary: `eval`, `allocate` and `sweep`.
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sapa::cli

#endif  // SAPA_TOOLS_CLI_HPP
