#include "kmatch/rng.hpp"

namespace kmatch {

namespace {
__extension__ typedef unsigned __int128 u128;
}

std::uint64_t Rng::below(std::uint64_t bound)
{
    // Lemire's multiply-shift with rejection.
    u128 product = static_cast<u128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = -bound % bound;
        while (low < threshold) {
            product = static_cast<u128>(next()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

} // namespace kmatch
