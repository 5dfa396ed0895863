#pragma once

namespace mpp {

// Command-line entry point. Exit codes: 0 success, 1 invalid input,
// 2 infeasible instance, 3 timeout, 4 external-solver failure.
int run_cli(int argc, const char* const* argv);

}  // namespace mpp
