#pragma once

namespace graphct {

/// Entry point of the command-line tool. Exit codes: 0 success, 1 runtime
/// failure, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv);

} // namespace graphct
