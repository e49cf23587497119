// The colored-stacks game behind the depth-3 lower bound: a valid
// configuration (no stack and no color owns half the cubes) always
// admits a removal order with floor(n/2)+1 consecutive states showing
// two top cubes of different colors. The solver plays the two-phase
// strategy; replay and the network<->game mappings turn its plans into
// growing branches for the arity certifier.

#ifndef SORTNET_CUBES_HPP
#define SORTNET_CUBES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sortnet/access.hpp"
#include "sortnet/core.hpp"

namespace sortnet {

struct CubeConfig {
    // stacks[s] lists colors bottom-to-top.
    std::vector<std::vector<int>> stacks;

    long total() const;
    // ceil(total/2); stack sizes and color counts must stay below it.
    long half_bound() const { return (total() + 1) / 2; }
};

struct RemovalPlan {
    std::vector<int> steps;  // 0-based stack indices
};

struct StepReport {
    std::vector<char> two_color_flags;  // states before each step and after the last
    long best_run = 0;
};

class CubesError : public NetworkError {
public:
    using NetworkError::NetworkError;
};

// Throws CubesError when a stack or color reaches half of the cubes,
// or fewer than 2 cubes exist.
void check_cube_invariants(const CubeConfig& config);

struct SolveDiagnostics {
    long phase1_removals = 0;
    long phase2_residue = 0;  // cubes left when the main loop stops
};

RemovalPlan solve_cubes(const CubeConfig& config, SolveDiagnostics* diag = nullptr);
StepReport replay_cubes(const CubeConfig& config, const RemovalPlan& plan);

// Ties a config to the network it came from.
struct CubeMapping {
    CubeConfig config;
    std::vector<int> stack_comparator;  // index into layer-1 comparators
    std::vector<int> color_comparator;  // color id -> layer-2 comparator index
};

// demo_mode skips the arity precondition (needed to reproduce networks
// whose first two layers have arity exactly half the zero count).
CubeMapping cube_config_from_network(const Network& net, const std::vector<Bit>& input,
                                     bool demo_mode = false);

GrowingBranch branch_from_plan(const Network& net, const std::vector<Bit>& input,
                               const RemovalPlan& plan, bool demo_mode = false);

// Valid random configuration with total cubes in [min_total, max_total];
// retries internally until check_cube_invariants passes.
CubeConfig random_cube_config(std::uint64_t seed, long min_total, long max_total);

std::string serialize_cubes(const CubeConfig& config);
CubeConfig parse_cubes(std::string_view text);
std::string serialize_plan(const RemovalPlan& plan);
RemovalPlan parse_plan(std::string_view text);

}  // namespace sortnet

#endif
