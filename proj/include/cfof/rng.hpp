#pragma once

#include <cstdint>
#include <vector>

namespace cfof {

// Counter-based generator: every draw is a pure function of (seed, stream, index),
// so generated datasets are reproducible regardless of evaluation order or
// thread count.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    std::uint64_t bits(std::uint64_t index) const {
        return mix(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream_ + 1)), index);
    }

    // Uniform in (0, 1), never exactly 0 or 1.
    double uniform(std::uint64_t index) const {
        return (static_cast<double>(bits(index) >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t stream() const { return stream_; }
    std::uint64_t seed() const { return seed_; }

    CounterRng substream(std::uint64_t stream) const {
        return CounterRng(seed_, stream);
    }

private:
    static std::uint64_t mix(std::uint64_t key, std::uint64_t ctr) {
        // splitmix64 finalizer applied to key/counter combination
        std::uint64_t z = key + ctr * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
};

// Deterministic Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> random_permutation(std::size_t n, const CounterRng& rng);

} // namespace cfof
