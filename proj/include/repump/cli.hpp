#pragma once

namespace repump {

// Entry point behind the `repump` binary. Exit codes: 0 success, 1 domain or
// config validation failure, 2 numerical non-convergence.
int run_cli(int argc, const char* const* argv);

}  // namespace repump
