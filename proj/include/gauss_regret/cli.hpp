#pragma once

#include <ostream>

namespace gauss_regret {

// Entry point of the gauss-regret tool. Returns the process exit status:
// 0 success, 1 error or failed verification, 2 inconclusive verification.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gauss_regret
