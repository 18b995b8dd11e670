#pragma once

namespace rotns {

/// Entry point behind the rotns binary. Subcommands: simulate, picard,
/// verify, sweep, decay, compare. Returns the process exit code:
/// 0 success, 1 a checked estimate failed, 2 bad configuration,
/// 3 blow-up during integration.
int run_command(int argc, const char* const* argv);

}  // namespace rotns
