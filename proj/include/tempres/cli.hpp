#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tempres {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitIo = 3,
    kExitDataMismatch = 4,
};

/// Entry point of the `tempres` tool. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const char* tool_version() noexcept;

} // namespace tempres
