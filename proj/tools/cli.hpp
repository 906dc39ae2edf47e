#pragma once

#include <ostream>

namespace densedisc {

// Entry point of the densedisc command line tool. Exit codes: 0 success,
// 1 run or verification failure, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace densedisc
