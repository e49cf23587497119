// Command-line front end. Exit codes: 0 success/sorted/certified,
// 1 counterexample/failure/unmet guarantee, 2 usage or format error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "sortnet/rng.hpp"

#include "sortnet/access.hpp"
#include "sortnet/constructions.hpp"
#include "sortnet/core.hpp"
#include "sortnet/cubes.hpp"
#include "sortnet/cubes2.hpp"
#include "sortnet/search.hpp"
#include "sortnet/verify.hpp"

namespace {

using namespace sortnet;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw UsageError("cannot write " + path);
    out << text;
}

Network load_network(const std::string& path) { return parse_network(read_file(path)); }

// Malformed game files are usage errors (exit 2), not failures.
template <typename Parser>
auto load_as(Parser&& parser, const std::string& path) {
    try {
        return parser(read_file(path));
    } catch (const NetworkError& e) {
        throw UsageError(path + ": " + e.what());
    }
}

std::string join_bits(const std::vector<Bit>& bits) {
    std::string out;
    for (size_t i = 0; i < bits.size(); ++i) {
        if (i)
            out += ' ';
        out += bits[i] ? '1' : '0';
    }
    return out;
}

bool g_rows = false;
const char* sep() { return g_rows ? "\t" : " "; }

int do_verify(const Network& net, const std::string& mode, std::uint64_t trials,
              std::optional<std::uint64_t> seed, bool serial) {
    VerifyReport report;
    if (mode == "exhaustive") {
        report = serial ? verify_exhaustive_serial(net) : verify_exhaustive(net);
    } else if (mode == "random") {
        if (!seed)
            throw UsageError("--mode random requires --seed");
        report = serial ? verify_random_serial(net, trials, *seed)
                        : verify_random(net, trials, *seed);
    } else {
        throw UsageError("unknown --mode " + mode);
    }
    if (report.ok()) {
        std::cout << "verdict" << sep() << "sorted\n";
    } else {
        std::cout << "verdict" << sep() << "counterexample\n";
        std::cout << join_bits(*report.witness) << "\n";
    }
    std::cout << "trials" << sep() << report.trials << "\n";
    if (report.seed)
        std::cout << "seed" << sep() << *report.seed << sep() << "generator" << sep()
                  << report.generator << "\n";
    return report.ok() ? kOk : kFail;
}

// Heuristic branch growth: flip the 0-bit keeping the largest access set
// before the last layer; no guarantee attached.
GrowingBranch find_branch_greedy(const Network& net) {
    const int d = net.depth();
    std::vector<Bit> current(static_cast<size_t>(net.inputs()), 0);
    GrowingBranch branch;
    for (;;) {
        if (access_set(net, current, d - 1).cells.size() < 2)
            break;
        branch.inputs.push_back(current);
        int best_pos = -1;
        size_t best_size = 0;
        for (size_t i = 0; i < current.size(); ++i) {
            if (current[i] != 0)
                continue;
            current[i] = 1;
            const size_t size = access_set(net, current, d - 1).cells.size();
            current[i] = 0;
            if (size >= 2 && size > best_size) {
                best_size = size;
                best_pos = static_cast<int>(i);
            }
        }
        if (best_pos < 0)
            break;
        current[static_cast<size_t>(best_pos)] = 1;
    }
    if (branch.inputs.empty())
        throw StrategyError("greedy strategy found no input with 2 accessible cells");
    return branch;
}

int do_certify(const Network& net, const std::string& strategy, std::optional<std::uint64_t> seed,
               bool demo, const std::string& out_path) {
    GrowingBranch branch;
    if (strategy == "depth2") {
        branch = find_branch_depth2(net);
    } else if (strategy == "cubes3") {
        const std::vector<Bit> zeros(static_cast<size_t>(net.inputs()), 0);
        CubeMapping mapping = cube_config_from_network(net, zeros, demo);
        RemovalPlan plan = solve_cubes(mapping.config);
        branch = branch_from_plan(net, zeros, plan, demo);
    } else if (strategy == "cubes4") {
        if (!seed)
            throw UsageError("--strategy cubes4 requires --seed");
        const std::vector<Bit> zeros(static_cast<size_t>(net.inputs()), 0);
        SolverParams params;
        params.seed = *seed;
        TwoSidedMapping mapping = two_sided_from_network(
            net, zeros, params.resolve_t(net.inputs()), demo);
        SubstackSelection sel = select_substacks(mapping.config, params);
        RemovalPlan plan = solve_second_cubes(mapping.config, sel, params);
        branch = branch_from_plan2(net, zeros, sel, plan, params.resolve_t(net.inputs()), demo);
    } else if (strategy == "greedy") {
        std::cout << "# heuristic strategy, no guaranteed bound\n";
        branch = find_branch_greedy(net);
    } else {
        throw UsageError("unknown --strategy " + strategy);
    }
    ArityCertificate cert = certify_last_layer_arity(net, branch);
    write_output(out_path, serialize_certificate(cert));
    std::cout << "bound" << sep() << cert.certified_bound << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"layered k-ary sorting networks: builders, verifiers, certifiers"};
    app.require_subcommand(1);
    std::string format = "human";
    app.add_option("--format", format, "human or rows")->check(CLI::IsMember({"human", "rows"}));
    int jobs = 0;
    app.add_option("--jobs", jobs, "worker threads for exhaustive verification and search");

    // build
    auto* build = app.add_subcommand("build", "construct a network");
    std::string construction;
    int build_n = 0;
    std::string build_out;
    build->add_option("--construction", construction, "depth3 or columnsort4")->required();
    build->add_option("--n", build_n, "input size")->required();
    build->add_option("-o,--output", build_out, "output file (default stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "zero-one-principle verification");
    std::string verify_file, verify_mode = "exhaustive";
    std::uint64_t verify_trials = 100000;
    std::optional<std::uint64_t> verify_seed;
    bool verify_serial = false;
    verify->add_option("file", verify_file, "network file")->required();
    verify->add_option("--mode", verify_mode, "exhaustive or random");
    verify->add_option("--trials", verify_trials, "random trials");
    verify->add_option("--seed", verify_seed, "seed for random mode");
    verify->add_flag("--serial", verify_serial, "use the serial reference kernel");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a network on an input");
    std::string eval_file;
    std::vector<Value> eval_input;
    bool eval_trace = false;
    eval_cmd->add_option("file", eval_file)->required();
    eval_cmd->add_option("--input", eval_input, "values, space separated")->required()->expected(-1);
    eval_cmd->add_flag("--trace", eval_trace, "print the array after every layer");

    // info
    auto* info = app.add_subcommand("info", "network statistics");
    std::string info_file;
    info->add_option("file", info_file)->required();

    // minarity
    auto* minarity = app.add_subcommand("minarity", "exact minimal arity by brute force");
    int ma_n = 0, ma_d = 0;
    double ma_timeout = 120.0;
    minarity->add_option("--n", ma_n)->required();
    minarity->add_option("--d", ma_d)->required();
    minarity->add_option("--timeout", ma_timeout, "seconds");

    // certify
    auto* certify = app.add_subcommand("certify", "last-layer arity certificate");
    std::string cert_file, cert_strategy, cert_out;
    std::optional<std::uint64_t> cert_seed;
    bool cert_demo = false;
    certify->add_option("file", cert_file)->required();
    certify->add_option("--strategy", cert_strategy, "depth2 | cubes3 | cubes4 | greedy")->required();
    certify->add_option("--seed", cert_seed);
    certify->add_option("-o,--output", cert_out, "certificate file (default stdout)");
    certify->add_flag("--demo", cert_demo, "skip arity preconditions");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "known arity bounds for (n, d)");
    long bd_n = 0;
    int bd_d = 0;
    bounds->add_option("--n", bd_n)->required();
    bounds->add_option("--d", bd_d)->required();

    // cubes
    auto* cubes = app.add_subcommand("cubes", "colored-stacks game");
    auto* cubes_solve = cubes->add_subcommand("solve");
    std::string c_config, c_plan_out;
    cubes_solve->add_option("config", c_config)->required();
    cubes_solve->add_option("-o,--output", c_plan_out, "plan file (default stdout)");
    auto* cubes_replay = cubes->add_subcommand("replay");
    std::string cr_config, cr_plan;
    cubes_replay->add_option("config", cr_config)->required();
    cubes_replay->add_option("plan", cr_plan)->required();
    auto* cubes_self = cubes->add_subcommand("selfcheck");
    std::optional<std::uint64_t> cs_seed;
    long cs_trials = 100;
    cubes_self->add_option("--seed", cs_seed);
    cubes_self->add_option("--trials", cs_trials);

    // cubes2
    auto* cubes2 = app.add_subcommand("cubes2", "two-sided game");
    auto* c2_select = cubes2->add_subcommand("select");
    std::string s_config, s_out;
    std::optional<std::uint64_t> s_seed;
    long s_divisor = 100, s_len = 0, s_retries = 1000;
    c2_select->add_option("config", s_config)->required();
    c2_select->add_option("--seed", s_seed);
    c2_select->add_option("--t-divisor", s_divisor);
    c2_select->add_option("--window-len", s_len);
    c2_select->add_option("--retries", s_retries);
    c2_select->add_option("-o,--output", s_out, "selection file (default stdout)");
    auto* c2_solve = cubes2->add_subcommand("solve");
    std::string v_config, v_sel, v_out;
    long v_divisor = 100, v_len = 0;
    c2_solve->add_option("config", v_config)->required();
    c2_solve->add_option("selection", v_sel)->required();
    c2_solve->add_option("--t-divisor", v_divisor);
    c2_solve->add_option("--window-len", v_len);
    c2_solve->add_option("-o,--output", v_out, "plan file (default stdout)");
    auto* c2_replay = cubes2->add_subcommand("replay");
    std::string r_config, r_sel, r_plan;
    long r_divisor = 100;
    c2_replay->add_option("config", r_config)->required();
    c2_replay->add_option("selection", r_sel)->required();
    c2_replay->add_option("plan", r_plan)->required();
    c2_replay->add_option("--t-divisor", r_divisor);
    auto* c2_self = cubes2->add_subcommand("selfcheck");
    std::optional<std::uint64_t> c2s_seed;
    long c2s_n = 1000000;
    c2_self->add_option("--seed", c2s_seed);
    c2_self->add_option("--n", c2s_n);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);  // --help
        app.exit(e);
        return kUsage;
    }

    if (format == "rows")
        g_rows = true;
#ifdef _OPENMP
    if (jobs > 0)
        omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif

    try {
        if (*build) {
            Network net = construction == "depth3"        ? build_depth3(build_n)
                          : construction == "columnsort4" ? build_columnsort4(build_n)
                                                          : throw UsageError("unknown --construction " +
                                                                             construction);
            write_output(build_out, serialize(net));
            return kOk;
        }
        if (*verify)
            return do_verify(load_network(verify_file), verify_mode, verify_trials, verify_seed,
                             verify_serial);
        if (*eval_cmd) {
            Network net = load_network(eval_file);
            if (eval_trace) {
                Trace tr = trace(net, eval_input);
                for (size_t a = 0; a < tr.arrays.size(); ++a) {
                    std::cout << (a == 0 ? "input" : "layer " + std::to_string(a)) << sep();
                    for (size_t i = 0; i < tr.arrays[a].size(); ++i)
                        std::cout << (i ? sep() : "") << tr.arrays[a][i];
                    std::cout << "\n";
                }
            } else {
                const std::vector<Value> out = evaluate(net, eval_input);
                for (size_t i = 0; i < out.size(); ++i)
                    std::cout << (i ? sep() : "") << out[i];
                std::cout << "\n";
            }
            return kOk;
        }
        if (*info) {
            const Stats st = stats(load_network(info_file));
            std::cout << "n" << sep() << st.n << "\n";
            std::cout << "depth" << sep() << st.depth << "\n";
            std::cout << "arity" << sep() << st.arity << "\n";
            for (size_t a = 0; a < st.per_layer.size(); ++a)
                std::cout << "layer" << sep() << a + 1 << sep() << "arity" << sep()
                          << st.per_layer[a] << "\n";
            return kOk;
        }
        if (*minarity) {
            SearchLimits limits;
            limits.timeout_seconds = ma_timeout;
            const MinArityResult result = minimal_arity(ma_n, ma_d, limits);
            if (result.exact) {
                std::cout << "k_min" << sep() << result.k_min << "\n";
                return kOk;
            }
            std::cout << "k_min" << sep() << "in" << sep() << "[" << result.lower << ","
                      << result.upper << "]" << sep() << "(timeout)\n";
            return kFail;
        }
        if (*certify)
            return do_certify(load_network(cert_file), cert_strategy, cert_seed, cert_demo,
                              cert_out);
        if (*bounds) {
            std::cout << "connectivity" << sep() << connectivity_bound(bd_n, bd_d) << "\n";
            if (bd_d <= 2)
                std::cout << "exact" << sep() << bd_n << "\n";
            else if (bd_d == 3)
                std::cout << "exact" << sep() << (bd_n + 1) / 2 << "\n";
            else if (bd_d == 4)
                std::cout << "order" << sep() << "n^(2/3)\n";
            return kOk;
        }
        if (*cubes_solve) {
            const CubeConfig config = load_as([](std::string_view t){ return parse_cubes(t); }, c_config);
            check_cube_invariants(config);
            SolveDiagnostics diag;
            const RemovalPlan plan = solve_cubes(config, &diag);
            write_output(c_plan_out, serialize_plan(plan));
            const StepReport report = replay_cubes(config, plan);
            const long target = config.total() / 2 + 1;
            std::cout << "best_run" << sep() << report.best_run << sep() << "target" << sep()
                      << target << "\n";
            std::cout << "phase1_removals" << sep() << diag.phase1_removals << "\n";
            return report.best_run >= target ? kOk : kFail;
        }
        if (*cubes_replay) {
            const CubeConfig config = load_as([](std::string_view t){ return parse_cubes(t); }, cr_config);
            const StepReport report = replay_cubes(config, load_as([](std::string_view t){ return parse_plan(t); }, cr_plan));
            const long target = config.total() / 2 + 1;
            std::cout << "best_run" << sep() << report.best_run << sep() << "target" << sep()
                      << target << "\n";
            return report.best_run >= target ? kOk : kFail;
        }
        if (*cubes_self) {
            if (!cs_seed)
                throw UsageError("cubes selfcheck requires --seed");
            long failures = 0;
            for (long i = 0; i < cs_trials; ++i) {
                const CubeConfig config =
                    random_cube_config(substream_seed(*cs_seed, static_cast<std::uint64_t>(i)), 4, 200);
                const StepReport report = replay_cubes(config, solve_cubes(config));
                if (report.best_run < config.total() / 2 + 1)
                    ++failures;
            }
            std::cout << "trials" << sep() << cs_trials << sep() << "failures" << sep() << failures
                      << sep() << "seed" << sep() << *cs_seed << "\n";
            return failures == 0 ? kOk : kFail;
        }
        if (*c2_select) {
            if (!s_seed)
                throw UsageError("cubes2 select requires --seed");
            const TwoSidedConfig config = load_as([](std::string_view t){ return parse_two_sided(t); }, s_config);
            SolverParams params;
            params.seed = *s_seed;
            params.t_divisor = s_divisor;
            params.substack_len = s_len;
            params.retry_budget = s_retries;
            const SubstackSelection sel = select_substacks(config, params);
            write_output(s_out, serialize_selection(sel));
            std::cout << "attempts" << sep() << sel.attempts_used << sep() << "strict" << sep()
                      << (sel.strict_target_met ? "yes" : "no") << sep() << "seed" << sep()
                      << *s_seed << "\n";
            return kOk;
        }
        if (*c2_solve) {
            const TwoSidedConfig config = load_as([](std::string_view t){ return parse_two_sided(t); }, v_config);
            const SubstackSelection sel = load_as([](std::string_view t){ return parse_selection(t); }, v_sel);
            SolverParams params;
            params.t_divisor = v_divisor;
            params.substack_len = v_len;
            const RemovalPlan plan = solve_second_cubes(config, sel, params);
            write_output(v_out, serialize_plan(plan));
            const StepReport2 report = replay_second(config, sel, plan);
            const long n = config.total_left();
            const long target =
                config.num_stacks() * (sel.window_len - 1) / 2 - params.resolve_t(n);
            std::cout << "best_run" << sep() << report.best_run << sep() << "target" << sep()
                      << target << "\n";
            return report.best_run >= target ? kOk : kFail;
        }
        if (*c2_replay) {
            const TwoSidedConfig config = load_as([](std::string_view t){ return parse_two_sided(t); }, r_config);
            const SubstackSelection sel = load_as([](std::string_view t){ return parse_selection(t); }, r_sel);
            SolverParams params;
            params.t_divisor = r_divisor;
            const StepReport2 report =
                replay_second(config, sel, load_as([](std::string_view t){ return parse_plan(t); }, r_plan));
            const long target = config.num_stacks() * (sel.window_len - 1) / 2 -
                                params.resolve_t(config.total_left());
            std::cout << "best_run" << sep() << report.best_run << sep() << "target" << sep()
                      << target << sep() << "monotone" << sep()
                      << (report.monotone_ok ? "yes" : "no") << "\n";
            return report.best_run >= target ? kOk : kFail;
        }
        if (*c2_self) {
            if (!c2s_seed)
                throw UsageError("cubes2 selfcheck requires --seed");
            SolverParams params;
            params.seed = *c2s_seed;
            const TwoSidedConfig config = random_two_sided(*c2s_seed, c2s_n);
            const SubstackSelection sel = select_substacks(config, params);
            const RemovalPlan plan = solve_second_cubes(config, sel, params);
            const StepReport2 report = replay_second(config, sel, plan);
            const long target = config.num_stacks() * (sel.window_len - 1) / 2 -
                                params.resolve_t(c2s_n);
            std::cout << "best_run" << sep() << report.best_run << sep() << "target" << sep()
                      << target << sep() << "seed" << sep() << *c2s_seed << "\n";
            return report.best_run >= target ? kOk : kFail;
        }
        throw UsageError("no subcommand");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kUsage;
    } catch (const CertificateError& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return kFail;
    } catch (const NetworkError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
}
