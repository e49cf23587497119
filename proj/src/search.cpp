#include "sortnet/search.hpp"

#include "sortnet/access.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <map>
#include <unordered_set>

namespace sortnet {

namespace {

void partitions_rec(int next, int n, int k, std::vector<std::vector<int>>& blocks,
                    std::vector<Layer>& out) {
    if (next > n) {
        Layer layer;
        for (const auto& b : blocks)
            layer.comparators.push_back(Comparator{b});
        out.push_back(std::move(layer));
        return;
    }
    for (size_t i = 0; i < blocks.size(); ++i) {
        // index, not reference: recursion may grow (and reallocate) blocks
        if (static_cast<int>(blocks[i].size()) < k) {
            blocks[i].push_back(next);
            partitions_rec(next + 1, n, k, blocks, out);
            blocks[i].pop_back();
        }
    }
    blocks.push_back({next});
    partitions_rec(next + 1, n, k, blocks, out);
    blocks.pop_back();
}

// apply[m] = array reached from array m through the layer.
std::vector<std::uint32_t> layer_table(const Layer& layer, int n) {
    std::vector<std::uint32_t> table(static_cast<size_t>(1) << n);
    for (std::uint32_t m = 0; m < table.size(); ++m) {
        std::uint32_t out = m;
        for (const Comparator& comp : layer.comparators) {
            int ones = 0;
            for (int member : comp.members)
                ones += (m >> (member - 1)) & 1u;
            // zeros sink to the low-numbered members
            for (size_t i = 0; i < comp.members.size(); ++i) {
                const std::uint32_t bit = 1u << (comp.members[i] - 1);
                if (static_cast<int>(i) >= static_cast<int>(comp.members.size()) - ones)
                    out |= bit;
                else
                    out &= ~bit;
            }
        }
        table[m] = out;
    }
    return table;
}

struct Searcher {
    int n, d;
    const std::vector<Layer>* partitions;
    std::vector<std::vector<std::uint32_t>> tables;
    std::uint64_t sorted_set = 0;  // bitset over arrays that are sorted
    std::vector<std::unordered_set<std::uint64_t>> failed;  // per remaining depth
    std::vector<int> chosen;
    std::chrono::steady_clock::time_point deadline;
    long ticks = 0;
    bool timed_out = false;

    std::uint64_t step(std::uint64_t state, const std::vector<std::uint32_t>& table) const {
        std::uint64_t next = 0;
        while (state) {
            const int m = std::countr_zero(state);
            state &= state - 1;
            next |= std::uint64_t(1) << table[static_cast<size_t>(m)];
        }
        return next;
    }

    bool dfs(std::uint64_t state, int remaining, bool canonical_first) {
        if ((state & ~sorted_set) == 0) {
            // later layers can stay as singletons
            for (int i = d - remaining; i < d; ++i)
                chosen[static_cast<size_t>(i)] = -1;
            return true;
        }
        if (remaining == 0)
            return false;
        if (++ticks % 4096 == 1 && std::chrono::steady_clock::now() > deadline) {
            timed_out = true;
            return false;
        }
        if (failed[static_cast<size_t>(remaining)].count(state))
            return false;
        std::map<std::vector<int>, bool> shapes_seen;
        for (size_t p = 0; p < partitions->size(); ++p) {
            if (canonical_first) {
                // layer 1 only: input relabeling makes partitions of equal
                // block-size multiset interchangeable
                std::vector<int> shape;
                for (const Comparator& c : (*partitions)[p].comparators)
                    shape.push_back(static_cast<int>(c.members.size()));
                std::sort(shape.begin(), shape.end());
                if (!shapes_seen.emplace(std::move(shape), true).second)
                    continue;
            }
            chosen[static_cast<size_t>(d - remaining)] = static_cast<int>(p);
            if (dfs(step(state, tables[p]), remaining - 1, false))
                return true;
            if (timed_out)
                return false;
        }
        failed[static_cast<size_t>(remaining)].insert(state);
        return false;
    }
};

Layer singleton_layer(int n) {
    Layer layer;
    for (int i = 1; i <= n; ++i)
        layer.comparators.push_back(Comparator{{i}});
    return layer;
}

}  // namespace

std::vector<Layer> all_partitions(int n, int k) {
    if (n < 1 || k < 1)
        throw NetworkError("partitions need n >= 1 and k >= 1");
    std::vector<Layer> out;
    std::vector<std::vector<int>> blocks;
    partitions_rec(1, n, k, blocks, out);
    return out;
}

SearchResult exists_network(int n, int d, int k, const SearchLimits& limits) {
    if (n > limits.max_n)
        throw NetworkError("search limited to n <= " + std::to_string(limits.max_n));
    if (n < 1 || n > 6 || d < 1 || k < 1)
        throw NetworkError("search needs 1 <= n <= 6, d >= 1, k >= 1");

    Searcher s;
    s.n = n;
    s.d = d;
    const std::vector<Layer> partitions = all_partitions(n, k);
    if (static_cast<long>(partitions.size()) > limits.max_partitions_per_layer)
        throw NetworkError("partition count exceeds the per-layer cap");
    s.partitions = &partitions;
    for (const Layer& layer : partitions)
        s.tables.push_back(layer_table(layer, n));
    for (int ones = 0; ones <= n; ++ones) {
        const std::uint32_t sorted = ones == 0 ? 0 : ((~0u << (n - ones)) & ((1u << n) - 1));
        s.sorted_set |= std::uint64_t(1) << sorted;
    }
    s.failed.resize(static_cast<size_t>(d) + 1);
    s.chosen.assign(static_cast<size_t>(d), -1);
    s.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(limits.timeout_seconds));

    std::uint64_t initial = 0;
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        initial |= std::uint64_t(1) << m;

    SearchResult result;
    if (s.dfs(initial, d, true)) {
        std::vector<Layer> layers;
        for (int p : s.chosen)
            layers.push_back(p >= 0 ? partitions[static_cast<size_t>(p)] : singleton_layer(n));
        result.status = SearchStatus::found;
        result.witness = Network(n, std::move(layers));
        return result;
    }
    result.status = s.timed_out ? SearchStatus::timeout : SearchStatus::none;
    return result;
}

MinArityResult minimal_arity(int n, int d, const SearchLimits& limits) {
    MinArityResult result;
    const int start = static_cast<int>(connectivity_bound(n, d));
    result.lower = start;
    result.upper = n;
    for (int k = start; k <= n; ++k) {
        SearchResult found = exists_network(n, d, k, limits);
        if (found.status == SearchStatus::found) {
            result.exact = result.lower == k;
            result.k_min = k;
            result.upper = k;
            result.witness = std::move(found.witness);
            return result;
        }
        if (found.status == SearchStatus::timeout)
            return result;  // interval [lower, upper] stands
        result.lower = k + 1;
    }
    // full comparator in one layer always sorts, so k = n must succeed
    throw NetworkError("search failed to find a witness at k = n");
}

}  // namespace sortnet
