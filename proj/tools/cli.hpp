#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cbct::cli {

// Runs one command line (without the program name). Exit codes: 0 success,
// 1 verification mismatch or engine failure, 2 invalid input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cbct::cli
