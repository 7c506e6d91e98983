#pragma once

#include <iosfwd>

namespace softcap {

// softcap {solve|campaign|verify|plotdata} ...
// Exit codes: 0 safe / success, 2 infeasible or constraint violations, 1 error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace softcap
