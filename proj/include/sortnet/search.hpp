// Brute-force search for the smallest arity that admits a sorting
// network at tiny (n, d). The state of a layer prefix is the set of
// Boolean arrays reachable from all 2^n inputs, packed into a 64-bit
// set (so n <= 6); memoization on (state, remaining depth) and
// first-layer shape canonicalization keep n = 6 tractable.

#ifndef SORTNET_SEARCH_HPP
#define SORTNET_SEARCH_HPP

#include <optional>
#include <vector>

#include "sortnet/core.hpp"

namespace sortnet {

struct SearchLimits {
    int max_n = 6;
    long max_partitions_per_layer = 1000000;
    double timeout_seconds = 120.0;
};

enum class SearchStatus { found, none, timeout };

struct SearchResult {
    SearchStatus status = SearchStatus::none;
    std::optional<Network> witness;
};

// All partitions of {1..n} into blocks of size <= k, each as a layer.
std::vector<Layer> all_partitions(int n, int k);

SearchResult exists_network(int n, int d, int k, const SearchLimits& limits = {});

struct MinArityResult {
    bool exact = false;
    int k_min = -1;        // set when exact
    int lower = -1;        // smallest k not excluded (timeout case)
    int upper = -1;        // first k with a witness, or n
    std::optional<Network> witness;
};

MinArityResult minimal_arity(int n, int d, const SearchLimits& limits = {});

}  // namespace sortnet

#endif
