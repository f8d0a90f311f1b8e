#pragma once

#include <iosfwd>

namespace isr {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    exit_yes = 0,
    exit_no = 1,
    exit_usage = 2,
    exit_io = 3,
    exit_budget = 4,
};

/// Runs one `isr` command. Reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isr
