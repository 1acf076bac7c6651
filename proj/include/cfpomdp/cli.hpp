#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cfpomdp/pomdp.hpp"

namespace cfpomdp {

/// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;          // success / equivalent
inline constexpr int kExitNegative = 1;    // not equivalent / check failed
inline constexpr int kExitUsage = 2;       // usage or input error

/// Policy argument: a single action id (constant policy), an inline table
/// "HIST -> ACTION, ... [, * -> ACTION]", or a file of "HIST -> ACTION" lines.
DeterministicPolicy parse_policy_arg(const Pomdp& p, const std::string& arg);

/// Entry point for the cfpomdp command line; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfpomdp
