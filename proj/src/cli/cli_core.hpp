#pragma once

#include <string>
#include <vector>

namespace finsler::cli {

// Runs one subcommand (args exclude the program name). Exit codes:
//   0  success / all verifications passed
//   1  a verification or cross-check failed
//   2  configuration or usage error
//   3  numerical non-convergence or degeneracy
//   4  I/O failure
int run(const std::vector<std::string>& args);

}  // namespace finsler::cli
