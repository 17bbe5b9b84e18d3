// Seeded random streams. RNG state is always explicit: callers own a stream
// and pass it down; nothing here reads ambient/global state. Parallel code
// derives one independent substream per trajectory from (seed, index), so
// results do not depend on how trajectories are assigned to workers.
#pragma once

#include <cstdint>
#include <random>

namespace qsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Stable stream id for trajectory `index` of run `seed`.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x6a09e667f3bcc909ull));
}

// Standard-normal draws from a dedicated engine.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

    static GaussianStream substream(std::uint64_t seed, std::uint64_t index) {
        return GaussianStream(derive_stream_seed(seed, index));
    }

    double next() { return dist_(eng_); }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace qsim
