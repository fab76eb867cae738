#pragma once

namespace zsph {

/// Entry point of the `zsph` tool. Returns the process exit code; usage
/// errors give 2, runtime failures 1.
int run_cli(int argc, const char* const* argv);

}  // namespace zsph
