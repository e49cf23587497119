// Core model for layered k-ary sorting networks: representation,
// evaluation semantics, statistics and the "sortnet v1" text format.

#ifndef SORTNET_CORE_HPP
#define SORTNET_CORE_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sortnet {

using Value = std::int64_t;
using Bit = std::uint8_t;

class NetworkError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Syntax error while reading the sortnet v1 format. `line` is 1-based.
class ParseError : public NetworkError {
public:
    ParseError(int line, int column, const std::string& what);
    int line;
    int column;
};

// A layer is not a partition of {1..n}; `index` is the offending cell.
class PartitionError : public NetworkError {
public:
    PartitionError(int layer, int index, const std::string& what);
    int layer;
    int index;
};

// A comparator sorts the cells listed in `members` in place.
// Members are 1-based, kept sorted ascending.
struct Comparator {
    std::vector<int> members;

    int arity() const { return static_cast<int>(members.size()); }

    bool operator==(const Comparator&) const = default;
};

struct Layer {
    std::vector<Comparator> comparators;

    bool operator==(const Layer&) const = default;
};

// An immutable layered network: d layers, each a partition of {1..n}.
// The constructor canonicalizes (members ascending, comparators ordered by
// smallest member) and validates the partition invariant.
class Network {
public:
    Network(int n, std::vector<Layer> layers);

    int inputs() const { return n_; }
    int depth() const { return static_cast<int>(layers_.size()); }
    const std::vector<Layer>& layers() const { return layers_; }
    const Layer& layer(int a) const { return layers_.at(static_cast<size_t>(a) - 1); }

    int arity() const;

    bool operator==(const Network& other) const = default;

private:
    int n_;
    std::vector<Layer> layers_;
};

struct Trace {
    // arrays[0] is the input, arrays[a] the cell values after layer a.
    std::vector<std::vector<Value>> arrays;
};

struct Stats {
    int n = 0;
    int depth = 0;
    int arity = 0;
    std::vector<int> per_layer;
};

std::vector<Value> evaluate(const Network& net, std::span<const Value> input);
Trace trace(const Network& net, std::span<const Value> input);
Stats stats(const Network& net);

Network parse_network(std::string_view text);
std::string serialize(const Network& net);

// Boolean evaluation by zero counting: a comparator with z zero inputs
// writes 0 to its z lowest-index cells. O(n) per layer. `cells` is
// updated in place, one array at a time.
void bool_step(const Layer& layer, std::vector<Bit>& cells, std::vector<Bit>& scratch);
std::vector<Bit> bool_evaluate(const Network& net, std::vector<Bit> input);
std::vector<std::vector<Bit>> bool_trace(const Network& net, std::vector<Bit> input);

bool is_sorted_bits(const std::vector<Bit>& bits);

// Mask-based Boolean evaluator for n <= 32: input bit i-1 of the word is
// cell i. Used by the exhaustive verifier and the search module.
class MaskEvaluator {
public:
    explicit MaskEvaluator(const Network& net);

    std::uint32_t run(std::uint32_t input) const;
    // Masks after every layer, index 0 = input.
    std::vector<std::uint32_t> run_trace(std::uint32_t input) const;

    int inputs() const { return n_; }
    // A mask is sorted iff its ones occupy the highest cells.
    bool sorted(std::uint32_t mask) const { return mask == sorted_form(mask); }
    std::uint32_t sorted_form(std::uint32_t mask) const;

private:
    struct CompiledComparator {
        std::uint32_t mask;
        // suffix[o] = bits of the o highest members.
        std::vector<std::uint32_t> suffix;
    };
    int n_;
    std::vector<std::vector<CompiledComparator>> layers_;
};

std::vector<Bit> bits_from_mask(std::uint32_t mask, int n);
std::uint32_t mask_from_bits(const std::vector<Bit>& bits);

}  // namespace sortnet

#endif
