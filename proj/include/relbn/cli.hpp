#pragma once

#include <ostream>

namespace relbn {

// Runs one `relbn` command. Exit status: 0 success, 1 format or validation
// error, 2 resource guard or unsupported shape, 3 zero-probability evidence.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace relbn
