// Deterministic seeded generator used by every randomized component.
// splitmix64 keeps reports reproducible across platforms; per-trial
// streams are derived so results do not depend on the worker count.

#ifndef SORTNET_RNG_HPP
#define SORTNET_RNG_HPP

#include <cstdint>

namespace sortnet {

inline constexpr const char* kGeneratorName = "splitmix64";

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Independent stream for (seed, index) pairs.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ index;
    return splitmix64(s);
}

class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return splitmix64(state_); }
    // Uniform in [0, bound), bound > 0. Rejection-free modulo is fine here:
    // bounds are tiny compared to 2^64.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t state_;
};

}  // namespace sortnet

#endif
