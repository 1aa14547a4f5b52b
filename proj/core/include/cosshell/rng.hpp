#pragma once

#include <cstdint>

namespace cosshell {

/// Counter-based pseudo-random source. Every draw is a pure function of
/// (seed, counter), so parallel consumers can sample disjoint counter ranges
/// and reproduce results bit-for-bit on any platform. The mixing function is
/// the splitmix64 finalizer.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t bits(std::uint64_t counter) const {
        std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform draw in [0, 1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Uniform draw in [-1, 1).
    double symmetric(std::uint64_t counter) const {
        return 2.0 * uniform(counter) - 1.0;
    }

    /// Independent child stream, for handing out to sub-tasks.
    CounterRng derive(std::uint64_t tag) const {
        return CounterRng(bits(0xD1B54A32D192ED03ull ^ tag));
    }

private:
    std::uint64_t seed_;
};

} // namespace cosshell
