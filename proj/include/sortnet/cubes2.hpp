// The two-sided game behind the depth-4 lower bound. Left stacks hold
// labeled cubes (labels name second-layer comparators), right stacks
// hold colored cubes (colors name third-layer comparators); removing a
// left cube pops the matching right stack. The solver fixes a random
// window of length l in each left stack, then plays the greedy
// two-color strategy, guaranteeing at least m/2*(l-1) - t consecutive
// states with access to two colors.

#ifndef SORTNET_CUBES2_HPP
#define SORTNET_CUBES2_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sortnet/access.hpp"
#include "sortnet/core.hpp"
#include "sortnet/cubes.hpp"

namespace sortnet {

class Cubes2Error : public NetworkError {
public:
    using NetworkError::NetworkError;
};

class SelectionError : public Cubes2Error {
public:
    SelectionError(const std::string& what, int worst_label_, long worst_spread_);
    int worst_label;
    long worst_spread;
};

struct SolverParams {
    long t_divisor = 100;     // t = floor(n^{2/3} / t_divisor)
    long substack_len = 0;    // 0 -> floor(n^{1/3})
    long retry_budget = 1000;
    std::uint64_t seed = 0;

    long resolve_t(long n) const;
    long resolve_l(long n) const;
};

// Largest x with x^3 <= v.
long icbrt(long v);

struct TwoSidedConfig {
    std::vector<std::vector<int>> left;   // labels bottom-to-top, 0-based ids
    std::vector<std::vector<int>> right;  // right[i] = colors for label i, bottom-to-top

    long total_left() const;
    long num_stacks() const { return static_cast<long>(left.size()); }
};

// Throws when sizes or the left/right coupling violate the bounds for
// the given t.
void check_two_sided(const TwoSidedConfig& config, long t);

struct SubstackSelection {
    std::vector<long> start;  // window offset from the bottom, per left stack
    long window_len = 0;
    bool strict_target_met = false;  // every label below m/10 windows (vs the m/4 bound)
    long attempts_used = 0;
};

SubstackSelection select_substacks(const TwoSidedConfig& config, const SolverParams& params);

RemovalPlan solve_second_cubes(const TwoSidedConfig& config, const SubstackSelection& selection,
                               const SolverParams& params);

struct StepReport2 {
    std::vector<int> access_sizes;  // |S| per state
    long best_run = 0;              // longest run of states with |S| >= 2
    long phase0_steps = 0;
    bool monotone_ok = true;  // |S| never falls back to 1 once it reached 2 in the main loop
};

StepReport2 replay_second(const TwoSidedConfig& config, const SubstackSelection& selection,
                          const RemovalPlan& plan);

// Merges undersized first-layer comparators until every arity lies in
// [t, 3t]; only layer 1 changes.
Network join_first_layer(const Network& net, long t);

struct TwoSidedMapping {
    TwoSidedConfig config;
    std::vector<int> stack_comparator;  // left stack -> layer-1 comparator index
    std::vector<int> label_comparator;  // label id -> layer-2 comparator index
    std::vector<int> color_comparator;  // color id -> layer-3 comparator index
};

TwoSidedMapping two_sided_from_network(const Network& net, const std::vector<Bit>& input, long t,
                                       bool demo_mode = false);

GrowingBranch branch_from_plan2(const Network& net, const std::vector<Bit>& input,
                                const SubstackSelection& selection, const RemovalPlan& plan,
                                long t, bool demo_mode = false);

// Uniform synthetic configuration with n cubes per side: left stacks of
// size about 2t, labels and colors spread so that every label stack and
// color stays below t.
TwoSidedConfig random_two_sided(std::uint64_t seed, long n, const SolverParams& params = {});

std::string serialize_two_sided(const TwoSidedConfig& config);
TwoSidedConfig parse_two_sided(std::string_view text);
std::string serialize_selection(const SubstackSelection& selection);
SubstackSelection parse_selection(std::string_view text);

}  // namespace sortnet

#endif
