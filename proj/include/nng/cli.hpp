#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nng {

// Entry point of the `nng` tool. args[0] is the program name. Returns 0 on
// success, 2 on usage errors, 1 on runtime failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nng
