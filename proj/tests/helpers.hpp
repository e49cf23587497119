// Shared fixtures for the test binaries.

#ifndef TESTS_HELPERS_HPP
#define TESTS_HELPERS_HPP

#include <vector>

#include "sortnet/core.hpp"
#include "sortnet/rng.hpp"

namespace testutil {

using namespace sortnet;

// The running n=8, d=3, k=4 example: rows, then crossed halves, then halves.
inline Network example8() {
    return Network(8, {
        Layer{{Comparator{{1, 2, 3, 4}}, Comparator{{5, 6, 7, 8}}}},
        Layer{{Comparator{{1, 2, 5, 6}}, Comparator{{3, 4, 7, 8}}}},
        Layer{{Comparator{{1, 2, 7, 8}}, Comparator{{3, 4, 5, 6}}}},
    });
}

// Arity-2 pairs in the first `pair_layers` layers, then one full comparator.
inline Network pairs_then_full(int n, int pair_layers) {
    std::vector<Layer> layers;
    for (int a = 0; a < pair_layers; ++a) {
        Layer layer;
        for (int i = 1; i <= n; i += 2)
            layer.comparators.push_back(Comparator{{i, i + 1}});
        layers.push_back(std::move(layer));
    }
    std::vector<int> all;
    for (int i = 1; i <= n; ++i)
        all.push_back(i);
    layers.push_back(Layer{{Comparator{all}}});
    return Network(n, std::move(layers));
}

// Uniformly random layer: a partition of {1..n} grown by coin flips.
inline Layer random_layer(SplitMix& rng, int n, int max_arity) {
    Layer layer;
    for (int i = 1; i <= n; ++i) {
        bool placed = false;
        if (!layer.comparators.empty() && rng.below(2) == 0) {
            const size_t c = rng.below(layer.comparators.size());
            if (static_cast<int>(layer.comparators[c].members.size()) < max_arity) {
                layer.comparators[c].members.push_back(i);
                placed = true;
            }
        }
        if (!placed)
            layer.comparators.push_back(Comparator{{i}});
    }
    return layer;
}

inline Network random_network(SplitMix& rng, int n, int depth, int max_arity) {
    std::vector<Layer> layers;
    for (int a = 0; a < depth; ++a)
        layers.push_back(random_layer(rng, n, max_arity));
    return Network(n, std::move(layers));
}

inline std::vector<Bit> random_bits(SplitMix& rng, int n) {
    std::vector<Bit> bits(static_cast<size_t>(n));
    for (auto& b : bits)
        b = static_cast<Bit>(rng.below(2));
    return bits;
}

}  // namespace testutil

#endif
