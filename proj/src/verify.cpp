#include "sortnet/verify.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "sortnet/rng.hpp"

namespace sortnet {

namespace {

VerifyReport exhaustive_report(const Network& net, std::uint64_t space, std::uint64_t first_bad) {
    VerifyReport report;
    report.trials = space;
    if (first_bad != std::numeric_limits<std::uint64_t>::max()) {
        report.verdict = VerifyReport::Verdict::counterexample;
        report.witness = bits_from_mask(static_cast<std::uint32_t>(first_bad), net.inputs());
    }
    return report;
}

void check_cap(const Network& net, int cap) {
    if (net.inputs() > cap)
        throw CapacityError("exhaustive verification refused: n=" + std::to_string(net.inputs()) +
                            " exceeds cap " + std::to_string(cap));
}

// Fills `bits` from a per-trial substream so the result is independent
// of how trials are scheduled across workers.
void random_bits(std::vector<Bit>& bits, std::uint64_t seed, std::uint64_t trial) {
    SplitMix rng(substream_seed(seed, trial));
    std::uint64_t word = 0;
    for (size_t i = 0; i < bits.size(); ++i) {
        if (i % 64 == 0)
            word = rng.next();
        bits[i] = (word >> (i % 64)) & 1u;
    }
}

}  // namespace

VerifyReport verify_exhaustive_serial(const Network& net, int cap) {
    check_cap(net, cap);
    MaskEvaluator eval(net);
    const std::uint64_t space = 1ull << net.inputs();
    std::uint64_t first_bad = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t x = 0; x < space; ++x) {
        if (!eval.sorted(eval.run(static_cast<std::uint32_t>(x)))) {
            first_bad = x;
            break;
        }
    }
    return exhaustive_report(net, space, first_bad);
}

VerifyReport verify_exhaustive(const Network& net, int cap) {
    check_cap(net, cap);
    MaskEvaluator eval(net);
    const std::int64_t space = 1ll << net.inputs();
    std::uint64_t first_bad = std::numeric_limits<std::uint64_t>::max();
#pragma omp parallel for schedule(static) reduction(min : first_bad)
    for (std::int64_t x = 0; x < space; ++x) {
        if (static_cast<std::uint64_t>(x) < first_bad &&
            !eval.sorted(eval.run(static_cast<std::uint32_t>(x))))
            first_bad = static_cast<std::uint64_t>(x);
    }
    return exhaustive_report(net, static_cast<std::uint64_t>(space), first_bad);
}

namespace {

VerifyReport random_report(const Network& net, std::uint64_t trials, std::uint64_t seed,
                           std::uint64_t first_bad_trial) {
    VerifyReport report;
    report.trials = trials;
    report.seed = seed;
    report.generator = kGeneratorName;
    if (first_bad_trial != std::numeric_limits<std::uint64_t>::max()) {
        report.verdict = VerifyReport::Verdict::counterexample;
        std::vector<Bit> bits(static_cast<size_t>(net.inputs()));
        random_bits(bits, seed, first_bad_trial);
        report.witness = std::move(bits);
    }
    return report;
}

}  // namespace

VerifyReport verify_random_serial(const Network& net, std::uint64_t trials, std::uint64_t seed) {
    std::vector<Bit> bits(static_cast<size_t>(net.inputs()));
    std::vector<Bit> scratch;
    std::uint64_t first_bad = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t t = 0; t < trials; ++t) {
        random_bits(bits, seed, t);
        for (const Layer& layer : net.layers())
            bool_step(layer, bits, scratch);
        if (!is_sorted_bits(bits)) {
            first_bad = t;
            break;
        }
    }
    return random_report(net, trials, seed, first_bad);
}

VerifyReport verify_random(const Network& net, std::uint64_t trials, std::uint64_t seed) {
    std::uint64_t first_bad = std::numeric_limits<std::uint64_t>::max();
#pragma omp parallel reduction(min : first_bad)
    {
        std::vector<Bit> bits(static_cast<size_t>(net.inputs()));
        std::vector<Bit> scratch;
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
            if (static_cast<std::uint64_t>(t) >= first_bad)
                continue;
            random_bits(bits, seed, static_cast<std::uint64_t>(t));
            for (const Layer& layer : net.layers())
                bool_step(layer, bits, scratch);
            if (!is_sorted_bits(bits))
                first_bad = static_cast<std::uint64_t>(t);
        }
    }
    return random_report(net, trials, seed, first_bad);
}

bool sorts_all_permutations(const Network& net) {
    std::vector<Value> values(static_cast<size_t>(net.inputs()));
    std::iota(values.begin(), values.end(), Value{0});
    std::vector<Value> perm = values;
    do {
        std::vector<Value> out = evaluate(net, perm);
        if (!std::is_sorted(out.begin(), out.end()))
            return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
}

}  // namespace sortnet
