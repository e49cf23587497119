#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "helpers.hpp"
#include "sortnet/cubes.hpp"

using namespace sortnet;
using testutil::pairs_then_full;

namespace {

// Exhaustive play: the longest two-color run any removal order achieves.
long brute_best_run(std::vector<std::vector<int>> stacks, long run, long best_prefix) {
    std::map<int, int> top_colors;
    int distinct = 0;
    for (const auto& s : stacks)
        if (!s.empty() && ++top_colors[s.back()] == 1)
            ++distinct;
    const bool two = distinct >= 2;
    run = two ? run + 1 : 0;
    long best = std::max(best_prefix, run);
    for (size_t i = 0; i < stacks.size(); ++i) {
        if (stacks[i].empty())
            continue;
        auto next = stacks;
        next[i].pop_back();
        best = std::max(best, brute_best_run(std::move(next), run, best));
    }
    return best;
}

Network two_pair_layers8() {
    std::vector<int> all{1, 2, 3, 4, 5, 6, 7, 8};
    return Network(8, {
        Layer{{Comparator{{1, 2, 3, 4}}, Comparator{{5, 6, 7, 8}}}},
        Layer{{Comparator{{1, 2, 5, 6}}, Comparator{{3, 4, 7, 8}}}},
        Layer{{Comparator{all}}},
    });
}

}  // namespace

TEST_CASE("config invariants") {
    CHECK_NOTHROW(check_cube_invariants({{{0, 1}, {1, 0}, {2, 2}}}));
    // a stack with ceil(n/2) cubes is rejected
    CHECK_THROWS_AS(check_cube_invariants({{{0, 0}, {1}, {2}}}), CubesError);
    // a color holding ceil(n/2) cubes is rejected
    CHECK_THROWS_AS(check_cube_invariants({{{0}, {0}, {1}, {2}}}), CubesError);
    // fewer than 2 cubes
    CHECK_THROWS_AS(check_cube_invariants({{{0}}}), CubesError);
}

TEST_CASE("mapping the n=8 two-pair-layer example") {
    const CubeMapping mapping =
        cube_config_from_network(two_pair_layers8(), {1, 0, 0, 1, 0, 1, 0, 0}, true);
    REQUIRE(mapping.config.stacks.size() == 2);
    CHECK(mapping.config.stacks[0] == std::vector<int>{0, 0});
    CHECK(mapping.config.stacks[1] == std::vector<int>{0, 0, 1});
    CHECK(mapping.stack_comparator == std::vector<int>{0, 1});
    CHECK(mapping.color_comparator == std::vector<int>{0, 1});
    CHECK(mapping.config.total() == 5);

    // the strict arity precondition rejects this network (arity = n/2)
    CHECK_THROWS_AS(cube_config_from_network(two_pair_layers8(), {1, 0, 0, 1, 0, 1, 0, 0}),
                    CubesError);
}

TEST_CASE("mapping edge cases") {
    const CubeMapping empty =
        cube_config_from_network(two_pair_layers8(), std::vector<Bit>(8, 1), true);
    CHECK(empty.config.stacks.empty());
    CHECK(empty.config.total() == 0);

    const CubeMapping pairs =
        cube_config_from_network(pairs_then_full(8, 2), std::vector<Bit>(8, 0));
    REQUIRE(pairs.config.stacks.size() == 4);
    for (size_t s = 0; s < 4; ++s)
        CHECK(pairs.config.stacks[s] == std::vector<int>(2, static_cast<int>(s)));
}

TEST_CASE("solver on small fixed configs") {
    const CubeConfig singletons{{{0}, {1}, {2}, {3}}};
    const RemovalPlan plan = solve_cubes(singletons);
    const StepReport report = replay_cubes(singletons, plan);
    CHECK(report.best_run >= 3);  // floor(4/2)+1

    const CubeConfig mixed{{{0, 1}, {1, 0}, {2, 2}}};
    const StepReport mixed_report = replay_cubes(mixed, solve_cubes(mixed));
    CHECK(mixed_report.best_run >= 4);
    CHECK(brute_best_run(mixed.stacks, 0, 0) >= 4);

    CHECK_THROWS_AS(solve_cubes({{{0, 0}, {1}, {2}}}), CubesError);
}

TEST_CASE("replay") {
    const CubeConfig two{{{0}, {1}}};
    const StepReport empty_plan = replay_cubes(two, {});
    CHECK(empty_plan.two_color_flags == std::vector<char>{1});
    CHECK(empty_plan.best_run == 1);

    RemovalPlan bad;
    bad.steps = {0, 0};  // second removal hits an empty stack
    CHECK_THROWS_AS(replay_cubes(two, bad), CubesError);

    const CubeConfig mixed{{{0, 1}, {1, 0}, {2, 2}}};
    const RemovalPlan plan = solve_cubes(mixed);
    const StepReport report = replay_cubes(mixed, plan);
    CHECK(report.two_color_flags.size() == plan.steps.size() + 1);
}

TEST_CASE("solver guarantee on randomized configs") {
    SolveDiagnostics diag;
    for (int i = 0; i < 300; ++i) {
        const CubeConfig config = random_cube_config(5000 + i, 4, 200);
        const long n = config.total();
        const long m = (n + 1) / 2;
        const RemovalPlan plan = solve_cubes(config, &diag);
        const StepReport report = replay_cubes(config, plan);
        CAPTURE(i);
        REQUIRE(report.best_run >= n / 2 + 1);
        REQUIRE(diag.phase1_removals <= m / 2 - 1);
        REQUIRE(diag.phase2_residue <= m / 2 + 1);
    }
}

TEST_CASE("solver matches the exhaustively best achievable run on tiny configs") {
    for (int i = 0; i < 60; ++i) {
        const CubeConfig config = random_cube_config(6000 + i, 4, 8);
        const long target = config.total() / 2 + 1;
        const long brute = brute_best_run(config.stacks, 0, 0);
        const long solver = replay_cubes(config, solve_cubes(config)).best_run;
        CAPTURE(i);
        REQUIRE(brute >= target);
        REQUIRE(solver >= target);
        REQUIRE(solver <= brute);
    }
}

TEST_CASE("game steps commute with input flips") {
    SplitMix rng(7001);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 6 + 2 * static_cast<int>(rng.below(4));
        Network net = testutil::random_network(rng, n, 3, 3);
        std::vector<Bit> input = testutil::random_bits(rng, n);
        const CubeMapping before = cube_config_from_network(net, input, true);
        if (before.config.stacks.empty())
            continue;
        const size_t pick = rng.below(before.config.stacks.size());
        const Comparator& comp =
            net.layer(1).comparators[static_cast<size_t>(before.stack_comparator[pick])];
        for (int m : comp.members) {
            if (input[static_cast<size_t>(m) - 1] == 0) {
                input[static_cast<size_t>(m) - 1] = 1;
                break;
            }
        }
        const CubeMapping after = cube_config_from_network(net, input, true);

        // compare in comparator-id space; the dense ids may shift
        auto canonical = [&](const CubeMapping& mapping) {
            std::map<int, std::vector<int>> stacks;
            for (size_t s = 0; s < mapping.config.stacks.size(); ++s) {
                std::vector<int> colors;
                for (int c : mapping.config.stacks[s])
                    colors.push_back(mapping.color_comparator[static_cast<size_t>(c)]);
                stacks[mapping.stack_comparator[s]] = std::move(colors);
            }
            return stacks;
        };
        auto expected = canonical(before);
        auto& stack = expected[before.stack_comparator[pick]];
        stack.pop_back();
        if (stack.empty())
            expected.erase(before.stack_comparator[pick]);
        REQUIRE(canonical(after) == expected);
    }
}

TEST_CASE("top cubes correspond to accessible cells after layer 1") {
    SplitMix rng(7002);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 6 + 2 * static_cast<int>(rng.below(4));
        const Network net = testutil::random_network(rng, n, 3, 3);
        const std::vector<Bit> input = testutil::random_bits(rng, n);
        const CubeMapping mapping = cube_config_from_network(net, input, true);
        const AccessSet access = access_set(net, input, 1);
        const auto after1 = bool_trace(net, input)[1];
        for (size_t s = 0; s < mapping.config.stacks.size(); ++s) {
            // top cube = the stack comparator's highest 0 cell
            const Comparator& comp =
                net.layer(1).comparators[static_cast<size_t>(mapping.stack_comparator[s])];
            int top_cell = 0;
            for (int m : comp.members)
                if (after1[static_cast<size_t>(m) - 1] == 0)
                    top_cell = m;
            REQUIRE(top_cell != 0);
            REQUIRE(std::binary_search(access.cells.begin(), access.cells.end(), top_cell));
        }
    }
}

TEST_CASE("branch extraction certifies the pipeline bound") {
    for (int n : {8, 10}) {
        CAPTURE(n);
        const Network net = pairs_then_full(n, 2);
        const std::vector<Bit> zeros(static_cast<size_t>(n), 0);
        const CubeMapping mapping = cube_config_from_network(net, zeros);
        const RemovalPlan plan = solve_cubes(mapping.config);
        const GrowingBranch branch = branch_from_plan(net, zeros, plan);
        const ArityCertificate cert = certify_last_layer_arity(net, branch);
        REQUIRE(cert.certified_bound >= n / 2 + 2);
    }

    const Network net = pairs_then_full(8, 2);
    const std::vector<Bit> zeros(8, 0);
    const GrowingBranch trivial = branch_from_plan(net, zeros, {});
    CHECK(trivial.inputs == std::vector<std::vector<Bit>>{zeros});
}

TEST_CASE("serialization round trips") {
    const CubeConfig config = random_cube_config(123, 4, 40);
    CHECK(parse_cubes(serialize_cubes(config)).stacks == config.stacks);

    RemovalPlan plan;
    plan.steps = {0, 2, 1, 2};
    CHECK(parse_plan(serialize_plan(plan)).steps == plan.steps);

    CHECK_THROWS_AS(parse_cubes("not cubes\n"), CubesError);
}
