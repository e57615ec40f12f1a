#ifndef SPINPOW_CLI_HPP
#define SPINPOW_CLI_HPP

#include <string>
#include <vector>

namespace spinpow::cli {

/// Exit codes: 0 success, 1 check failure, 2 input error, 3 internal error.
int run(std::vector<std::string> args);

}  // namespace spinpow::cli

#endif
