#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace latmix {

/// Entry point of the `latmix` tool. args[0] is the program name.
/// Returns 0 on success, 1 for numerical or I/O failures and 2 for usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latmix
