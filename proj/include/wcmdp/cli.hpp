#pragma once

#include <iosfwd>

namespace wcmdp {

/// Entry point of the command-line tool. Exit codes: 0 ok, 1 error,
/// 2 degenerate verdict (check-degeneracy only).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wcmdp
