#pragma once

#include <string>
#include <vector>

namespace symmarkov::cli {

/// Runs the command line given argv-style arguments (without argv[0]).
/// Exit code contract: 0 all requested checks pass, 1 input or usage
/// error, 2 check failures (reports still written).
int run(const std::vector<std::string>& args);

}  // namespace symmarkov::cli
