#pragma once

namespace evonas {

/// The `evonas` command-line entry point (search / compare / gradcheck /
/// report). Returns the process exit code: 0 success, 1 runtime failure
/// (failed run, tolerance breach, missing history), 2 usage or
/// configuration errors (unknown flags, missing or malformed config).
int run_cli(int argc, const char* const* argv);

}  // namespace evonas
