#include "sortnet/cubes2.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "sortnet/rng.hpp"

namespace sortnet {

SelectionError::SelectionError(const std::string& what, int worst_label_, long worst_spread_)
    : Cubes2Error(what), worst_label(worst_label_), worst_spread(worst_spread_) {}

long icbrt(long v) {
    long x = static_cast<long>(std::cbrt(static_cast<double>(v)));
    while (x > 0 && x * x * x > v)
        --x;
    while ((x + 1) * (x + 1) * (x + 1) <= v)
        ++x;
    return x;
}

long SolverParams::resolve_t(long n) const {
    return icbrt(n * n) / t_divisor;  // floor(n^{2/3} / D)
}

long SolverParams::resolve_l(long n) const {
    return substack_len > 0 ? substack_len : icbrt(n);
}

long TwoSidedConfig::total_left() const {
    long sum = 0;
    for (const auto& stack : left)
        sum += static_cast<long>(stack.size());
    return sum;
}

void check_two_sided(const TwoSidedConfig& config, long t) {
    const long a = static_cast<long>(config.right.size());
    std::vector<long> label_count(static_cast<size_t>(a), 0);
    for (size_t j = 0; j < config.left.size(); ++j) {
        const long size = static_cast<long>(config.left[j].size());
        if (size < t || size > 3 * t)
            throw Cubes2Error("left stack " + std::to_string(j + 1) + " has size " +
                              std::to_string(size) + ", needs [" + std::to_string(t) + ", " +
                              std::to_string(3 * t) + "]");
        for (int label : config.left[j]) {
            if (label < 0 || label >= a)
                throw Cubes2Error("label " + std::to_string(label + 1) + " out of range");
            ++label_count[static_cast<size_t>(label)];
        }
    }
    std::map<int, long> color_count;
    for (size_t i = 0; i < config.right.size(); ++i) {
        if (static_cast<long>(config.right[i].size()) > t)
            throw Cubes2Error("right stack " + std::to_string(i + 1) + " exceeds size " +
                              std::to_string(t));
        if (static_cast<long>(config.right[i].size()) != label_count[i])
            throw Cubes2Error("right stack " + std::to_string(i + 1) + " has size " +
                              std::to_string(config.right[i].size()) + " but " +
                              std::to_string(label_count[i]) + " left cubes carry its label");
        for (int c : config.right[i])
            ++color_count[c];
    }
    for (const auto& [color, count] : color_count)
        if (count > t)
            throw Cubes2Error("color " + std::to_string(color + 1) + " owns " +
                              std::to_string(count) + " cubes, bound is " + std::to_string(t));
}

SubstackSelection select_substacks(const TwoSidedConfig& config, const SolverParams& params) {
    const long n = config.total_left();
    const long m = config.num_stacks();
    const long l = params.resolve_l(n);
    if (l < 1)
        throw Cubes2Error("window length must be positive");
    for (size_t j = 0; j < config.left.size(); ++j)
        if (static_cast<long>(config.left[j].size()) < l)
            throw Cubes2Error("left stack " + std::to_string(j + 1) +
                              " is shorter than the window length " + std::to_string(l));

    const long a = static_cast<long>(config.right.size());
    std::vector<long> last_window(static_cast<size_t>(a), -1);
    std::vector<long> spread(static_cast<size_t>(a), 0);
    SubstackSelection sel;
    sel.window_len = l;
    sel.start.resize(config.left.size());
    int worst_label = -1;
    long worst_spread = 0;

    for (long attempt = 0; attempt < params.retry_budget; ++attempt) {
        SplitMix rng(substream_seed(params.seed, static_cast<std::uint64_t>(attempt)));
        std::fill(last_window.begin(), last_window.end(), -1);
        std::fill(spread.begin(), spread.end(), 0);
        for (size_t j = 0; j < config.left.size(); ++j) {
            const long size = static_cast<long>(config.left[j].size());
            sel.start[j] = static_cast<long>(rng.below(static_cast<std::uint64_t>(size - l + 1)));
            for (long p = sel.start[j]; p < sel.start[j] + l; ++p) {
                const int label = config.left[j][static_cast<size_t>(p)];
                if (last_window[static_cast<size_t>(label)] != static_cast<long>(j)) {
                    last_window[static_cast<size_t>(label)] = static_cast<long>(j);
                    ++spread[static_cast<size_t>(label)];
                }
            }
        }
        long max_spread = 0;
        int max_label = 0;
        for (long i = 0; i < a; ++i)
            if (spread[static_cast<size_t>(i)] > max_spread) {
                max_spread = spread[static_cast<size_t>(i)];
                max_label = static_cast<int>(i);
            }
        if (4 * max_spread < m) {
            sel.strict_target_met = 10 * max_spread < m;
            sel.attempts_used = attempt + 1;
            return sel;
        }
        if (max_spread > worst_spread) {
            worst_spread = max_spread;
            worst_label = max_label;
        }
    }
    throw SelectionError("no window selection met the m/4 label-spread bound within " +
                             std::to_string(params.retry_budget) + " attempts; label " +
                             std::to_string(worst_label + 1) + " reached spread " +
                             std::to_string(worst_spread),
                         worst_label, worst_spread);
}

namespace {

// Incremental state of the two-sided game: tracks tops, window
// exhaustion and the set S of colors currently accessible.
class GameState {
public:
    GameState(const TwoSidedConfig& config, const SubstackSelection& selection)
        : config_(config), sel_(selection) {
        const size_t m = config.left.size();
        if (sel_.start.size() != m)
            throw Cubes2Error("selection does not match the configuration");
        top_.resize(m);
        for (size_t j = 0; j < m; ++j) {
            if (config.left[j].empty())
                throw Cubes2Error("left stack " + std::to_string(j + 1) + " is empty");
            top_[j] = static_cast<long>(config.left[j].size()) - 1;
        }
        rtop_.resize(config.right.size());
        for (size_t i = 0; i < config.right.size(); ++i)
            rtop_[i] = static_cast<long>(config.right[i].size()) - 1;

        int max_color = -1;
        for (const auto& stack : config.right)
            for (int c : stack)
                max_color = std::max(max_color, c);
        color_count_.assign(static_cast<size_t>(max_color) + 1, 0);
        label_top_count_.assign(config.right.size(), 0);
        for (size_t j = 0; j < m; ++j)
            inc_label(top_label(static_cast<long>(j)));
        for (size_t j = 0; j < m; ++j) {
            if (top_[j] == window_bottom(static_cast<long>(j)))
                ++exhausted_;
            else
                active_.insert(static_cast<int>(j));
        }
    }

    long window_bottom(long j) const { return sel_.start[static_cast<size_t>(j)]; }
    long window_top(long j) const { return sel_.start[static_cast<size_t>(j)] + sel_.window_len - 1; }
    long top_index(long j) const { return top_[static_cast<size_t>(j)]; }
    int top_label(long j) const {
        return config_.left[static_cast<size_t>(j)][static_cast<size_t>(top_[static_cast<size_t>(j)])];
    }
    int color_of_label(int i) const {
        return config_.right[static_cast<size_t>(i)][static_cast<size_t>(rtop_[static_cast<size_t>(i)])];
    }
    long access_colors() const { return static_cast<long>(s_set_.size()); }
    const std::set<int>& color_set() const { return s_set_; }
    long exhausted() const { return exhausted_; }
    const std::set<int>& active() const { return active_; }
    long stacks() const { return static_cast<long>(config_.left.size()); }

    void remove_top(long j) {
        if (j < 0 || j >= stacks())
            throw Cubes2Error("step names stack " + std::to_string(j + 1) + ", which does not exist");
        if (top_[static_cast<size_t>(j)] <= window_bottom(j))
            throw Cubes2Error("step would take the last cube of window " + std::to_string(j + 1));
        const int label = top_label(j);
        dec_label(label);
        const long rt = rtop_[static_cast<size_t>(label)];
        if (rt < 0)
            throw Cubes2Error("right stack " + std::to_string(label + 1) + " underflow");
        const int old_color = config_.right[static_cast<size_t>(label)][static_cast<size_t>(rt)];
        --rtop_[static_cast<size_t>(label)];
        if (label_top_count_[static_cast<size_t>(label)] > 0) {
            dec_color(old_color);
            inc_color(color_of_label(label));
        }
        --top_[static_cast<size_t>(j)];
        inc_label(top_label(j));
        if (top_[static_cast<size_t>(j)] == window_bottom(j)) {
            ++exhausted_;
            active_.erase(static_cast<int>(j));
        }
    }

private:
    void inc_label(int i) {
        if (++label_top_count_[static_cast<size_t>(i)] == 1)
            inc_color(color_of_label(i));
    }
    void dec_label(int i) {
        if (--label_top_count_[static_cast<size_t>(i)] == 0)
            dec_color(color_of_label(i));
    }
    void inc_color(int c) {
        if (++color_count_[static_cast<size_t>(c)] == 1)
            s_set_.insert(c);
    }
    void dec_color(int c) {
        if (--color_count_[static_cast<size_t>(c)] == 0)
            s_set_.erase(c);
    }

    const TwoSidedConfig& config_;
    const SubstackSelection& sel_;
    std::vector<long> top_;
    std::vector<long> rtop_;
    std::vector<long> label_top_count_;  // labels carried by current tops
    std::vector<long> color_count_;      // labels-with-holders per color
    std::set<int> s_set_;
    std::set<int> active_;  // non-exhausted stacks
    long exhausted_ = 0;
};

}  // namespace

RemovalPlan solve_second_cubes(const TwoSidedConfig& config, const SubstackSelection& selection,
                               const SolverParams& params) {
    (void)params;
    GameState game(config, selection);
    RemovalPlan plan;
    const long m = game.stacks();

    // Uncover the windows.
    for (long j = 0; j < m; ++j) {
        while (game.top_index(j) > game.window_top(j)) {
            game.remove_top(j);
            plan.steps.push_back(static_cast<int>(j));
        }
    }

    const long exhaust_limit = (m + 1) / 2;
    while (game.exhausted() < exhaust_limit && !game.active().empty()) {
        long pick = -1;
        if (game.access_colors() >= 3) {
            pick = *game.active().begin();
        } else {
            // Excluded labels come from the lowest-index stacks granting
            // access to each color of S.
            std::set<int> wanted(game.color_set());
            std::set<int> excluded;
            for (long j = 0; j < m && !wanted.empty(); ++j) {
                const int label = game.top_label(j);
                if (wanted.erase(game.color_of_label(label)))
                    excluded.insert(label);
            }
            for (int j : game.active()) {
                if (!excluded.count(game.top_label(j))) {
                    pick = j;
                    break;
                }
            }
        }
        if (pick < 0)
            break;  // stuck
        game.remove_top(pick);
        plan.steps.push_back(static_cast<int>(pick));
    }
    return plan;
}

StepReport2 replay_second(const TwoSidedConfig& config, const SubstackSelection& selection,
                          const RemovalPlan& plan) {
    GameState game(config, selection);
    StepReport2 report;
    for (size_t j = 0; j < config.left.size(); ++j)
        report.phase0_steps += static_cast<long>(config.left[j].size()) -
                               (selection.start[j] + selection.window_len);
    report.access_sizes.reserve(plan.steps.size() + 1);
    report.access_sizes.push_back(static_cast<int>(game.access_colors()));
    for (int step : plan.steps) {
        game.remove_top(step);
        report.access_sizes.push_back(static_cast<int>(game.access_colors()));
    }
    long run = 0;
    bool reached_two = false;
    for (size_t i = 0; i < report.access_sizes.size(); ++i) {
        const int s = report.access_sizes[i];
        run = s >= 2 ? run + 1 : 0;
        report.best_run = std::max(report.best_run, run);
        if (static_cast<long>(i) >= report.phase0_steps) {
            if (s >= 2)
                reached_two = true;
            else if (reached_two && s == 1)
                report.monotone_ok = false;
        }
    }
    return report;
}

Network join_first_layer(const Network& net, long t) {
    if (net.inputs() < t)
        throw Cubes2Error("network has fewer than t cells; joining cannot reach arity t");
    std::vector<std::vector<int>> comps;
    for (const Comparator& c : net.layer(1).comparators) {
        if (static_cast<long>(c.members.size()) > 3 * t)
            throw Cubes2Error("first-layer comparator of arity " + std::to_string(c.members.size()) +
                              " exceeds 3t");
        comps.push_back(c.members);
    }
    auto arity = [](const std::vector<int>& c) { return static_cast<long>(c.size()); };

    for (;;) {
        // Two smallest-index comparators below t get joined.
        long first = -1, second = -1;
        for (size_t i = 0; i < comps.size(); ++i) {
            if (arity(comps[i]) < t) {
                if (first < 0)
                    first = static_cast<long>(i);
                else {
                    second = static_cast<long>(i);
                    break;
                }
            }
        }
        if (second < 0) {
            if (first >= 0) {
                // A single undersized comparator joins any one below 2t.
                long host = -1;
                for (size_t i = 0; i < comps.size(); ++i)
                    if (static_cast<long>(i) != first && arity(comps[i]) < 2 * t) {
                        host = static_cast<long>(i);
                        break;
                    }
                if (host < 0)
                    throw Cubes2Error("lone undersized comparator has no join partner below 2t");
                comps[static_cast<size_t>(std::min(first, host))]
                    .insert(comps[static_cast<size_t>(std::min(first, host))].end(),
                            comps[static_cast<size_t>(std::max(first, host))].begin(),
                            comps[static_cast<size_t>(std::max(first, host))].end());
                comps.erase(comps.begin() + std::max(first, host));
            }
            break;
        }
        comps[static_cast<size_t>(first)].insert(comps[static_cast<size_t>(first)].end(),
                                                 comps[static_cast<size_t>(second)].begin(),
                                                 comps[static_cast<size_t>(second)].end());
        comps.erase(comps.begin() + second);
    }

    std::vector<Layer> layers = net.layers();
    layers[0].comparators.clear();
    for (auto& members : comps)
        layers[0].comparators.push_back(Comparator{std::move(members)});
    return Network(net.inputs(), std::move(layers));
}

TwoSidedMapping two_sided_from_network(const Network& net, const std::vector<Bit>& input, long t,
                                       bool demo_mode) {
    if (net.depth() != 4)
        throw Cubes2Error("two-sided mapping needs a depth-4 network");
    if (!demo_mode) {
        for (size_t c = 0; c < net.layer(1).comparators.size(); ++c) {
            const long k = net.layer(1).comparators[c].arity();
            if (k < t || k > 3 * t)
                throw Cubes2Error("layer 1 comparator " + std::to_string(c + 1) + " has arity " +
                                  std::to_string(k) + ", needs [t, 3t]");
        }
        for (int layer : {2, 3})
            for (size_t c = 0; c < net.layer(layer).comparators.size(); ++c)
                if (net.layer(layer).comparators[c].arity() > t)
                    throw Cubes2Error("layer " + std::to_string(layer) + " comparator " +
                                      std::to_string(c + 1) + " exceeds arity t");
    }

    const auto arrays = bool_trace(net, input);
    const int n = net.inputs();
    std::vector<int> second_owner(static_cast<size_t>(n) + 1, -1);
    std::vector<int> third_owner(static_cast<size_t>(n) + 1, -1);
    for (size_t c = 0; c < net.layer(2).comparators.size(); ++c)
        for (int m : net.layer(2).comparators[c].members)
            second_owner[static_cast<size_t>(m)] = static_cast<int>(c);
    for (size_t c = 0; c < net.layer(3).comparators.size(); ++c)
        for (int m : net.layer(3).comparators[c].members)
            third_owner[static_cast<size_t>(m)] = static_cast<int>(c);

    TwoSidedMapping mapping;
    // Labels: second-layer comparators holding zeros, densely renumbered.
    std::map<int, int> label_of_owner;
    for (int p = 1; p <= n; ++p)
        if (arrays[1][static_cast<size_t>(p) - 1] == 0)
            label_of_owner.emplace(second_owner[static_cast<size_t>(p)], 0);
    int next_label = 0;
    for (auto& [owner, label] : label_of_owner) {
        label = next_label++;
        mapping.label_comparator.push_back(owner);
    }
    std::map<int, int> color_of_owner;
    for (int p = 1; p <= n; ++p)
        if (arrays[2][static_cast<size_t>(p) - 1] == 0)
            color_of_owner.emplace(third_owner[static_cast<size_t>(p)], 0);
    int next_color = 0;
    for (auto& [owner, color] : color_of_owner) {
        color = next_color++;
        mapping.color_comparator.push_back(owner);
    }

    for (size_t c = 0; c < net.layer(1).comparators.size(); ++c) {
        std::vector<int> labels;
        for (int m : net.layer(1).comparators[c].members)
            if (arrays[1][static_cast<size_t>(m) - 1] == 0)
                labels.push_back(label_of_owner[second_owner[static_cast<size_t>(m)]]);
        if (labels.empty())
            continue;
        mapping.config.left.push_back(std::move(labels));
        mapping.stack_comparator.push_back(static_cast<int>(c));
    }
    mapping.config.right.resize(static_cast<size_t>(next_label));
    for (const auto& [owner, label] : label_of_owner) {
        const Comparator& comp = net.layer(2).comparators[static_cast<size_t>(owner)];
        for (int m : comp.members)
            if (arrays[2][static_cast<size_t>(m) - 1] == 0)
                mapping.config.right[static_cast<size_t>(label)].push_back(
                    color_of_owner[third_owner[static_cast<size_t>(m)]]);
    }
    return mapping;
}

GrowingBranch branch_from_plan2(const Network& net, const std::vector<Bit>& input,
                                const SubstackSelection& selection, const RemovalPlan& plan,
                                long t, bool demo_mode) {
    TwoSidedMapping mapping = two_sided_from_network(net, input, t, demo_mode);
    std::vector<std::vector<Bit>> inputs{input};
    std::vector<Bit> current = input;
    for (size_t i = 0; i < plan.steps.size(); ++i) {
        const int s = plan.steps[i];
        if (s < 0 || static_cast<size_t>(s) >= mapping.stack_comparator.size())
            throw Cubes2Error("plan step " + std::to_string(i + 1) + " names an unmapped stack");
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
            throw Cubes2Error("plan step " + std::to_string(i + 1) +
                              ": comparator has no 0-input left, plan out of sync");
        inputs.push_back(current);
    }

    StepReport2 report = replay_second(mapping.config, selection, plan);
    long best_len = 0, best_start = 0, run = 0;
    for (size_t i = 0; i < report.access_sizes.size(); ++i) {
        run = report.access_sizes[i] >= 2 ? run + 1 : 0;
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

TwoSidedConfig random_two_sided(std::uint64_t seed, long n, const SolverParams& params) {
    const long t = std::max<long>(1, params.resolve_t(n));
    if (n < 2 * t)
        throw Cubes2Error("generator needs n >= 2t");
    SplitMix rng(seed);

    TwoSidedConfig config;
    long remaining = n;
    std::vector<long> sizes;
    while (remaining >= 4 * t) {
        sizes.push_back(2 * t);
        remaining -= 2 * t;
    }
    if (remaining >= 3 * t) {
        sizes.push_back(remaining / 2);
        sizes.push_back(remaining - remaining / 2);
    } else {
        sizes.push_back(remaining);
    }

    const long a = std::max<long>(1, (2 * n + t - 1) / t);
    std::vector<long> label_used(static_cast<size_t>(a), 0);
    std::vector<long> color_used(static_cast<size_t>(a), 0);
    config.left.reserve(sizes.size());
    for (long size : sizes) {
        std::vector<int> stack;
        stack.reserve(static_cast<size_t>(size));
        for (long c = 0; c < size; ++c) {
            long label = -1;
            for (int tries = 0; tries < 256 && label < 0; ++tries) {
                const long cand = static_cast<long>(rng.below(static_cast<std::uint64_t>(a)));
                if (label_used[static_cast<size_t>(cand)] < t)
                    label = cand;
            }
            if (label < 0)
                throw Cubes2Error("generator could not keep every label below t");
            ++label_used[static_cast<size_t>(label)];
            stack.push_back(static_cast<int>(label));
        }
        config.left.push_back(std::move(stack));
    }
    config.right.resize(static_cast<size_t>(a));
    for (long i = 0; i < a; ++i) {
        for (long c = 0; c < label_used[static_cast<size_t>(i)]; ++c) {
            long color = -1;
            for (int tries = 0; tries < 256 && color < 0; ++tries) {
                const long cand = static_cast<long>(rng.below(static_cast<std::uint64_t>(a)));
                if (color_used[static_cast<size_t>(cand)] < t)
                    color = cand;
            }
            if (color < 0)
                throw Cubes2Error("generator could not keep every color below t");
            ++color_used[static_cast<size_t>(color)];
            config.right[static_cast<size_t>(i)].push_back(static_cast<int>(color));
        }
    }
    return config;
}

std::string serialize_two_sided(const TwoSidedConfig& config) {
    std::ostringstream out;
    out << "cubes2 v1\n";
    out << "labels " << config.right.size() << "\n";
    for (const auto& stack : config.left) {
        out << "left:";
        for (int label : stack)
            out << " " << label + 1;
        out << "\n";
    }
    for (const auto& stack : config.right) {
        out << "right:";
        for (int c : stack)
            out << " " << c + 1;
        out << "\n";
    }
    return out.str();
}

TwoSidedConfig parse_two_sided(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "cubes2 v1")
        throw Cubes2Error("expected header 'cubes2 v1'");
    if (!std::getline(in, line) || line.rfind("labels ", 0) != 0)
        throw Cubes2Error("expected 'labels <count>'");
    const long a = std::stol(line.substr(7));
    TwoSidedConfig config;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        bool is_left = line.rfind("left:", 0) == 0;
        bool is_right = line.rfind("right:", 0) == 0;
        if (!is_left && !is_right)
            throw Cubes2Error("expected 'left:' or 'right:' line: " + line);
        std::istringstream fields(line.substr(is_left ? 5 : 6));
        std::vector<int> stack;
        int v;
        while (fields >> v)
            stack.push_back(v - 1);
        (is_left ? config.left : config.right).push_back(std::move(stack));
    }
    if (static_cast<long>(config.right.size()) != a)
        throw Cubes2Error("label count does not match the number of right stacks");
    return config;
}

std::string serialize_selection(const SubstackSelection& selection) {
    std::ostringstream out;
    out << "selection v1\n";
    out << "l " << selection.window_len << "\n";
    for (long s : selection.start)
        out << s << "\n";
    return out.str();
}

SubstackSelection parse_selection(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "selection v1")
        throw Cubes2Error("expected header 'selection v1'");
    if (!std::getline(in, line) || line.rfind("l ", 0) != 0)
        throw Cubes2Error("expected 'l <window length>'");
    SubstackSelection sel;
    sel.window_len = std::stol(line.substr(2));
    long s;
    while (in >> s)
        sel.start.push_back(s);
    return sel;
}

}  // namespace sortnet
