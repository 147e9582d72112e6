#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace l1persist {

/// Exit codes: 0 success, 1 runtime failure, 2 bad arguments.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Long flag names ("--seed", ...) registered for each subcommand.
std::map<std::string, std::vector<std::string>> cli_flags();

/// Parses "a:step:b" (inclusive) or a comma-separated list.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace l1persist
