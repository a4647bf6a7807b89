#pragma once

#include <cstdint>
#include <random>

namespace texfract {

// std::uniform_int_distribution is implementation-defined; this fixed-width
// multiply-shift draw keeps seeded runs reproducible across standard libraries.
inline uint64_t uniform_below(std::mt19937_64& rng, uint64_t n) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

template <typename T>
void shuffle_deterministic(std::vector<T>& v, std::mt19937_64& rng) {
    for (size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

} // namespace texfract
