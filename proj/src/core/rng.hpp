#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace sqa {

// Purpose tags keep the streams of one sample independent of each other.
enum class StreamTag : std::uint64_t {
    placement = 1,
    qa = 2,
    synth = 3,
    split_shuffle = 4,
};

std::uint64_t splitmix64(std::uint64_t x);

// Seed for the (master_seed, index, tag) substream. Pure function of its
// arguments, so samples can be drawn in any order or in parallel.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index, StreamTag tag);

// Thin wrapper over mt19937_64 with portable draws: std:: distributions are
// implementation-defined, these are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t master_seed, std::uint64_t index, StreamTag tag)
        : engine_(substream_seed(master_seed, index, tag)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0, 1).
    double uniform_open();

    // Uniform on [0, 1).
    double uniform();

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace sqa
