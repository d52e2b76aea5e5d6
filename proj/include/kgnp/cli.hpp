#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kgnp {

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitEngine = 3 };

/// Runs one `kgnp` subcommand. `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kgnp
