#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "kmatch/errors.hpp"

namespace kmatch::detail {

// Two unsigned decimal fields separated by exactly one space.
inline std::pair<std::uint64_t, std::uint64_t> parse_pair(std::string_view line, std::size_t line_no)
{
    const auto space = line.find(' ');
    const auto first = line.substr(0, space == std::string_view::npos ? line.size() : space);
    const auto second = space == std::string_view::npos ? std::string_view{} : line.substr(space + 1);
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    auto r1 = std::from_chars(first.data(), first.data() + first.size(), a);
    auto r2 = std::from_chars(second.data(), second.data() + second.size(), b);
    if (first.empty() || second.empty() || r1.ec != std::errc{} ||
        r1.ptr != first.data() + first.size() || r2.ec != std::errc{} ||
        r2.ptr != second.data() + second.size()) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected two unsigned decimal integers separated by one space");
    }
    return {a, b};
}

} // namespace kmatch::detail
