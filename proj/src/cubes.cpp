#include "sortnet/cubes.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>

#include "sortnet/rng.hpp"

namespace sortnet {

long CubeConfig::total() const {
    long sum = 0;
    for (const auto& stack : stacks)
        sum += static_cast<long>(stack.size());
    return sum;
}

void check_cube_invariants(const CubeConfig& config) {
    const long n = config.total();
    if (n < 2)
        throw CubesError("configuration needs at least 2 cubes");
    const long bound = config.half_bound();
    std::map<int, long> color_count;
    for (size_t s = 0; s < config.stacks.size(); ++s) {
        if (static_cast<long>(config.stacks[s].size()) >= bound)
            throw CubesError("stack " + std::to_string(s + 1) + " holds " +
                             std::to_string(config.stacks[s].size()) +
                             " cubes, bound is " + std::to_string(bound));
        for (int c : config.stacks[s])
            ++color_count[c];
    }
    for (const auto& [color, count] : color_count)
        if (count >= bound)
            throw CubesError("color " + std::to_string(color) + " owns " + std::to_string(count) +
                             " cubes, bound is " + std::to_string(bound));
}

namespace {

using State = std::vector<std::vector<int>>;

bool monochromatic(const std::vector<int>& stack) {
    return std::adjacent_find(stack.begin(), stack.end(), std::not_equal_to<>()) == stack.end();
}

bool two_top_colors(const State& state) {
    int seen = -1;
    for (const auto& stack : state) {
        if (stack.empty())
            continue;
        if (seen == -1)
            seen = stack.back();
        else if (stack.back() != seen)
            return true;
    }
    return false;
}

// (A): two monochromatic stacks of different colors.
bool cond_a(const State& state) {
    int seen = -1;
    for (const auto& stack : state) {
        if (stack.empty() || !monochromatic(stack))
            continue;
        if (seen == -1)
            seen = stack.back();
        else if (stack.back() != seen)
            return true;
    }
    return false;
}

// (B): two top colors, >= 3 stacks, >= 2 non-monochromatic stacks.
bool cond_b(const State& state) {
    int stacks = 0, poly = 0;
    for (const auto& stack : state) {
        if (stack.empty())
            continue;
        ++stacks;
        poly += !monochromatic(stack);
    }
    return stacks >= 3 && poly >= 2 && two_top_colors(state);
}

struct TerminalThreeStacks {
    size_t singleton;
    size_t keep;
    size_t drain;
};

// Matches the 3-stack terminal pattern: a lone cube of color c plus two
// stacks whose top differs from c and whose remaining cubes are all c.
std::optional<TerminalThreeStacks> match_terminal(const State& state) {
    std::vector<size_t> nonempty;
    for (size_t s = 0; s < state.size(); ++s)
        if (!state[s].empty())
            nonempty.push_back(s);
    if (nonempty.size() != 3)
        return std::nullopt;
    for (size_t rot = 0; rot < 3; ++rot) {
        size_t lone = nonempty[rot];
        size_t s1 = nonempty[(rot + 1) % 3];
        size_t s2 = nonempty[(rot + 2) % 3];
        if (state[lone].size() != 1)
            continue;
        const int c = state[lone].front();
        auto fits = [&](const std::vector<int>& stack) {
            if (stack.size() < 2 || stack.back() == c)
                return false;
            return std::all_of(stack.begin(), stack.end() - 1, [&](int x) { return x == c; });
        };
        if (fits(state[s1]) && fits(state[s2])) {
            // Drain the larger stack; the smaller one keeps the two-color pair alive.
            size_t keep = s1, drain = s2;
            if (state[s1].size() > state[s2].size() ||
                (state[s1].size() == state[s2].size() && s1 > s2))
                std::swap(keep, drain);
            return TerminalThreeStacks{lone, keep, drain};
        }
    }
    return std::nullopt;
}

}  // namespace

RemovalPlan solve_cubes(const CubeConfig& config, SolveDiagnostics* diag) {
    check_cube_invariants(config);
    State state = config.stacks;
    RemovalPlan plan;
    auto remove_top = [&](size_t s) {
        state[s].pop_back();
        plan.steps.push_back(static_cast<int>(s));
    };

    // Phase 1: establish (A) or (B) within floor(m/2)-1 removals.
    long phase1 = 0;
    if (!cond_a(state) && !cond_b(state)) {
        std::vector<size_t> poly;
        for (size_t s = 0; s < state.size(); ++s)
            if (!state[s].empty() && !monochromatic(state[s]))
                poly.push_back(s);
        if (poly.size() < 2)
            throw CubesError("internal: valid configuration without (A) has fewer than 2 "
                             "non-monochromatic stacks");
        // All tops share one color here. In the two lowest-index
        // non-monochromatic stacks, mark the highest differing cube and
        // uncover the one nearer the top.
        const int top_color = [&] {
            for (const auto& stack : state)
                if (!stack.empty())
                    return stack.back();
            throw CubesError("internal: empty configuration");
        }();
        size_t best_stack = 0;
        size_t best_above = SIZE_MAX;
        for (size_t idx = 0; idx < 2; ++idx) {
            const auto& stack = state[poly[idx]];
            for (size_t j = stack.size(); j-- > 0;) {
                if (stack[j] != top_color) {
                    size_t above = stack.size() - 1 - j;
                    if (above < best_above) {
                        best_above = above;
                        best_stack = poly[idx];
                    }
                    break;
                }
            }
        }
        for (size_t i = 0; i < best_above; ++i) {
            remove_top(best_stack);
            ++phase1;
        }
        if (!cond_a(state) && !cond_b(state))
            throw CubesError("internal: phase 1 failed to establish (A) or (B)");
    }

    // Phase 2: remove cubes keeping (A), else keeping (B), until stuck.
    for (;;) {
        bool moved = false;
        for (auto keeps : {cond_a, cond_b}) {
            for (size_t s = 0; s < state.size() && !moved; ++s) {
                if (state[s].empty())
                    continue;
                const int cube = state[s].back();
                state[s].pop_back();
                if (keeps(state)) {
                    plan.steps.push_back(static_cast<int>(s));
                    moved = true;
                } else {
                    state[s].push_back(cube);
                }
            }
            if (moved)
                break;
        }
        if (!moved)
            break;
    }

    long residue = 0;
    for (const auto& stack : state)
        residue += static_cast<long>(stack.size());
    if (diag) {
        diag->phase1_removals = phase1;
        diag->phase2_residue = residue;
    }

    // Terminal 3-stack pattern: draining the third stack preserves the
    // two-color property and shortens the leftover.
    if (auto terminal = match_terminal(state)) {
        while (!state[terminal->drain].empty())
            remove_top(terminal->drain);
    }
    return plan;
}

StepReport replay_cubes(const CubeConfig& config, const RemovalPlan& plan) {
    State state = config.stacks;
    StepReport report;
    report.two_color_flags.push_back(two_top_colors(state));
    for (size_t i = 0; i < plan.steps.size(); ++i) {
        const int s = plan.steps[i];
        if (s < 0 || static_cast<size_t>(s) >= state.size() || state[static_cast<size_t>(s)].empty())
            throw CubesError("illegal step " + std::to_string(i + 1) + ": stack " +
                             std::to_string(s + 1) + " is empty or missing");
        state[static_cast<size_t>(s)].pop_back();
        report.two_color_flags.push_back(two_top_colors(state));
    }
    long run = 0;
    for (char flag : report.two_color_flags) {
        run = flag ? run + 1 : 0;
        report.best_run = std::max(report.best_run, run);
    }
    return report;
}

CubeMapping cube_config_from_network(const Network& net, const std::vector<Bit>& input,
                                     bool demo_mode) {
    if (net.depth() != 3)
        throw CubesError("cube mapping needs a depth-3 network");
    long zeros = 0;
    for (Bit b : input)
        zeros += b == 0;
    const long bound = (zeros + 1) / 2;
    if (!demo_mode) {
        for (int layer : {1, 2}) {
            const auto& comps = net.layer(layer).comparators;
            for (size_t c = 0; c < comps.size(); ++c)
                if (static_cast<long>(comps[c].members.size()) >= bound)
                    throw CubesError("layer " + std::to_string(layer) + " comparator " +
                                     std::to_string(c + 1) + " has arity " +
                                     std::to_string(comps[c].members.size()) +
                                     ", mapping needs arity below " + std::to_string(bound));
        }
    }

    const auto arrays = bool_trace(net, input);
    const auto& after_first = arrays[1];
    // Cell -> owning layer-2 comparator.
    std::vector<int> second_owner(static_cast<size_t>(net.inputs()) + 1, -1);
    const auto& second = net.layer(2).comparators;
    for (size_t c = 0; c < second.size(); ++c)
        for (int m : second[c].members)
            second_owner[static_cast<size_t>(m)] = static_cast<int>(c);

    CubeMapping mapping;
    std::map<int, int> color_of_owner;  // dense ids in layer-2 comparator order
    std::vector<std::vector<int>> owners_per_stack;
    const auto& first = net.layer(1).comparators;
    for (size_t c = 0; c < first.size(); ++c) {
        std::vector<int> owners;
        for (int m : first[c].members)
            if (after_first[static_cast<size_t>(m) - 1] == 0)
                owners.push_back(second_owner[static_cast<size_t>(m)]);
        if (owners.empty())
            continue;
        for (int o : owners)
            color_of_owner.emplace(o, 0);
        owners_per_stack.push_back(std::move(owners));
        mapping.stack_comparator.push_back(static_cast<int>(c));
    }
    int next_color = 0;
    for (auto& [owner, color] : color_of_owner) {
        color = next_color++;
        mapping.color_comparator.push_back(owner);
    }
    for (auto& owners : owners_per_stack) {
        std::vector<int> colors;
        for (int o : owners)
            colors.push_back(color_of_owner[o]);
        mapping.config.stacks.push_back(std::move(colors));
    }
    return mapping;
}

GrowingBranch branch_from_plan(const Network& net, const std::vector<Bit>& input,
                               const RemovalPlan& plan, bool demo_mode) {
    CubeMapping mapping = cube_config_from_network(net, input, demo_mode);
    std::vector<std::vector<Bit>> inputs{input};
    std::vector<Bit> current = input;
    for (size_t i = 0; i < plan.steps.size(); ++i) {
        const int s = plan.steps[i];
        if (s < 0 || static_cast<size_t>(s) >= mapping.stack_comparator.size())
            throw CubesError("plan step " + std::to_string(i + 1) + " names an unmapped stack");
        const Comparator& comp =
            net.layer(1).comparators[static_cast<size_t>(mapping.stack_comparator[static_cast<size_t>(s)])];
        int flipped = 0;
        for (int m : comp.members) {
            if (current[static_cast<size_t>(m) - 1] == 0) {
                current[static_cast<size_t>(m) - 1] = 1;
                flipped = m;
                break;
            }
        }
        if (flipped == 0)
            throw CubesError("plan step " + std::to_string(i + 1) +
                             ": comparator has no 0-input left, plan out of sync");
        inputs.push_back(current);
    }

    // Keep only the inputs of the best two-color run; those are exactly
    // the states with two accessible cells before the last layer.
    StepReport report = replay_cubes(mapping.config, plan);
    long best_len = 0, best_start = 0, run = 0;
    for (size_t i = 0; i < report.two_color_flags.size(); ++i) {
        run = report.two_color_flags[i] ? run + 1 : 0;
        if (run > best_len) {
            best_len = run;
            best_start = static_cast<long>(i) - run + 1;
        }
    }
    if (best_len == 0)
        return validate_branch({inputs.front()});
    std::vector<std::vector<Bit>> kept(inputs.begin() + best_start,
                                       inputs.begin() + best_start + best_len);
    return validate_branch(kept);
}

std::string serialize_cubes(const CubeConfig& config) {
    std::ostringstream out;
    out << "cubes v1\n";
    for (const auto& stack : config.stacks) {
        for (size_t i = 0; i < stack.size(); ++i)
            out << (i ? " " : "") << stack[i];
        out << "\n";
    }
    return out.str();
}

CubeConfig parse_cubes(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "cubes v1")
        throw CubesError("expected header 'cubes v1'");
    CubeConfig config;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream fields(line);
        std::vector<int> stack;
        int c;
        while (fields >> c)
            stack.push_back(c);
        if (!fields.eof())
            throw CubesError("stack line must contain integers: " + line);
        config.stacks.push_back(std::move(stack));
    }
    return config;
}

std::string serialize_plan(const RemovalPlan& plan) {
    std::ostringstream out;
    for (int s : plan.steps)
        out << s + 1 << "\n";
    return out.str();
}

RemovalPlan parse_plan(std::string_view text) {
    std::istringstream in{std::string(text)};
    RemovalPlan plan;
    int s;
    while (in >> s)
        plan.steps.push_back(s - 1);
    return plan;
}

CubeConfig random_cube_config(std::uint64_t seed, long min_total, long max_total) {
    if (min_total < 4 || max_total < min_total)
        throw CubesError("generator needs 4 <= min_total <= max_total");
    for (std::uint64_t attempt = 0;; ++attempt) {
        SplitMix rng(substream_seed(seed, attempt));
        const long total =
            min_total + static_cast<long>(rng.below(static_cast<std::uint64_t>(max_total - min_total + 1)));
        const long cap = (total + 1) / 2 - 1;  // strict majority is invalid
        const long max_stacks = std::min<long>(total, 12);
        const long m = 3 + static_cast<long>(rng.below(static_cast<std::uint64_t>(std::max<long>(1, max_stacks - 2))));
        const long colors = 3 + static_cast<long>(rng.below(6));
        CubeConfig config;
        config.stacks.assign(static_cast<size_t>(m), {});
        std::vector<long> color_used(static_cast<size_t>(colors), 0);
        bool ok = true;
        for (long c = 0; c < total && ok; ++c) {
            long stack = -1, color = -1;
            for (int tries = 0; tries < 64; ++tries) {
                const long s = static_cast<long>(rng.below(static_cast<std::uint64_t>(m)));
                if (static_cast<long>(config.stacks[static_cast<size_t>(s)].size()) < cap) {
                    stack = s;
                    break;
                }
            }
            for (int tries = 0; tries < 64; ++tries) {
                const long col = static_cast<long>(rng.below(static_cast<std::uint64_t>(colors)));
                if (color_used[static_cast<size_t>(col)] < cap) {
                    color = col;
                    break;
                }
            }
            ok = stack >= 0 && color >= 0;
            if (ok) {
                config.stacks[static_cast<size_t>(stack)].push_back(static_cast<int>(color));
                ++color_used[static_cast<size_t>(color)];
            }
        }
        if (!ok)
            continue;
        std::erase_if(config.stacks, [](const auto& s) { return s.empty(); });
        try {
            check_cube_invariants(config);
        } catch (const CubesError&) {
            continue;
        }
        return config;
    }
}

}  // namespace sortnet
