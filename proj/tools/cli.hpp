#pragma once

namespace hypwave::cli {

/// Parses the command line (plus an optional JSON config file; flags win),
/// dispatches to the requested subcommand, and writes its artifacts.
/// Returns the process exit code: 0 success, 1 a check failed or a
/// computation aborted, 2 configuration error.
int run(int argc, char** argv);

}  // namespace hypwave::cli
