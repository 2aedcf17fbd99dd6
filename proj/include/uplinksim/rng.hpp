// Counter-based pseudo-random streams for Monte Carlo runs.
//
// Each (seed, counter) pair deterministically keys an independent SplitMix64
// stream, so trials can be partitioned across workers in any way without
// changing the drawn values.

#pragma once

#include <cstdint>

namespace uplinksim {

namespace detail {
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t counter)
        : state_(detail::splitmix64_mix(
              (seed + 0x9E3779B97F4A7C15ULL) ^
              (counter * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return detail::splitmix64_mix(state_);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace uplinksim
