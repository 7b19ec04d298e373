#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace kmatch {

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 on usage, parse or regime errors, 2 when an algorithm gives up
/// (generator stall, instance above a size cap).
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Non-negative integer, plain ("1000000") or scientific ("1e6"). Throws
/// std::invalid_argument for anything else.
std::uint64_t parse_count(std::string_view text);

} // namespace kmatch
