// Zero-one-principle verification. The exhaustive check enumerates
// Boolean inputs as integers 0..2^n-1 (bit i of the integer is cell i+1)
// and reports the smallest counterexample in that order. The OpenMP
// kernel partitions the input space; a serial reference implementation
// is kept for testing and benchmarking.

#ifndef SORTNET_VERIFY_HPP
#define SORTNET_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sortnet/core.hpp"

namespace sortnet {

inline constexpr int kDefaultExhaustiveCap = 24;

struct VerifyReport {
    enum class Verdict { sorted, counterexample };

    Verdict verdict = Verdict::sorted;
    std::optional<std::vector<Bit>> witness;
    std::uint64_t trials = 0;
    std::optional<std::uint64_t> seed;
    std::string generator;

    bool ok() const { return verdict == Verdict::sorted; }
};

class CapacityError : public NetworkError {
public:
    using NetworkError::NetworkError;
};

VerifyReport verify_exhaustive(const Network& net, int cap = kDefaultExhaustiveCap);
VerifyReport verify_exhaustive_serial(const Network& net, int cap = kDefaultExhaustiveCap);

VerifyReport verify_random(const Network& net, std::uint64_t trials, std::uint64_t seed);
VerifyReport verify_random_serial(const Network& net, std::uint64_t trials, std::uint64_t seed);

// Oracle used to validate the zero-one principle on small n: checks all
// n! orderings of distinct integers directly.
bool sorts_all_permutations(const Network& net);

}  // namespace sortnet

#endif
