#pragma once

#include <iosfwd>

namespace hotstream {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    exit_ok = 0,
    exit_io = 1,
    exit_params = 2,
    exit_integrity = 3,
    exit_invariant = 4,
};

/// Entry point of the hotstream tool, with injectable output streams.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hotstream
