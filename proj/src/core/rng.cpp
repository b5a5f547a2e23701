#include "core/rng.hpp"

namespace sqa {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index, StreamTag tag) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ index);
    h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
    return h;
}

double Rng::uniform_open() {
    // 53 random bits, centred in their bucket: never 0, never 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    // Rejection sampling on the top of the range avoids modulo bias.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

}  // namespace sqa
