// Release gate: eight checks, one line each, nonzero exit if any fails.
// Usage: acceptance_tests --cli <path-to-concap> --mutant <path-to-mutant>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "concap/capgraph.hpp"
#include "concap/fuzz.hpp"
#include "concap/netsim.hpp"
#include "concap/rbcast.hpp"
#include "concap/rscode.hpp"

using namespace concap;

namespace {

std::string fail(const std::string& what) { return what; }

NetworkSpec random_net(std::mt19937_64& rng, int n, int lo, int hi) {
    std::uniform_int_distribution<int> cap(lo, hi);
    std::vector<std::vector<int>> caps(n, std::vector<int>(n, 0));
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v) caps[u][v] = cap(rng);
    return NetworkSpec::make(n, 1, std::move(caps));
}

// 1. The closed-form bound agrees with independent brute-force enumeration
//    on random digraphs, and with the 4-node pair-sum formula where it applies.
std::string check_bound_oracle() {
    std::mt19937_64 rng(0xACC'0001);
    std::uniform_int_distribution<int> size(4, 6);
    for (int i = 0; i < 200; ++i) {
        const int n = size(rng);
        NetworkSpec net = random_net(rng, n, 0, 10);
        const long long got = capacity_upper_bound(net).i_star;
        const long long oracle = brute_force_bound(net);
        if (got != oracle)
            return fail("digraph " + std::to_string(i) + " (n=" + std::to_string(n) +
                        "): bound " + std::to_string(got) + " != brute force " +
                        std::to_string(oracle));
        if (n == 4 && four_node_bound(net) != oracle)
            return fail("digraph " + std::to_string(i) + ": four_node_bound " +
                        std::to_string(four_node_bound(net)) + " != brute force " +
                        std::to_string(oracle));
    }
    return {};
}

// 2. At r = I* - 1 every complete 4-node net keeps at least three pair sums
//    above r, and a check triple (x, y, z) with x < z always exists.
std::string check_pair_surplus() {
    std::mt19937_64 rng(0xACC'0002);
    for (int i = 0; i < 1000; ++i) {
        NetworkSpec net = random_net(rng, 4, 1, 10);
        const long long r = four_node_bound(net) - 1;
        const int pairs = count_pairs_above(net, r);
        if (pairs < 3)
            return fail("net " + std::to_string(i) + ": only " + std::to_string(pairs) +
                        " pairs above r=" + std::to_string(r));
        auto [x, y, z] = select_check_triple(net, r);
        const bool in_range = x >= 0 && x < 4 && y >= 0 && y < 4 && z >= 0 && z < 4;
        if (!in_range || x == y || y == z || x == z || x >= z)
            return fail("net " + std::to_string(i) + ": malformed triple");
        if (pair_sum(net, x, y) <= r || pair_sum(net, y, z) <= r)
            return fail("net " + std::to_string(i) + ": triple pair sums not above r");
    }
    return {};
}

SymbolVec eval_poly(const DataValue& v, Gf16 alpha) {
    SymbolVec out(v.l());
    for (int k = 0; k < v.l(); ++k) {
        Gf16 acc(0);
        for (int m = v.r() - 1; m >= 0; --m) acc = acc * alpha + v.packets[m][k];
        out[k] = acc;
    }
    return out;
}

// Try every r-subset as an interpolation base; consistent iff some base
// explains every packet.
std::optional<DataValue> subset_oracle(const std::vector<CodedPacket>& packets, int r) {
    const int m = static_cast<int>(packets.size());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        if (std::popcount(mask) != r) continue;
        std::vector<CodedPacket> base;
        for (int b = 0; b < m; ++b)
            if (mask >> b & 1) base.push_back(packets[b]);
        DataValue cand = solve(base, r);
        bool covers = true;
        for (const auto& p : packets)
            if (eval_poly(cand, p.point.alpha) != p.payload) {
                covers = false;
                break;
            }
        if (covers) return cand;
    }
    return std::nullopt;
}

DataValue random_value(std::mt19937_64& rng, int r, int l, int generation) {
    std::uniform_int_distribution<int> sym(0, 0xFFFF);
    DataValue d = DataValue::zeros(r, l, generation);
    for (auto& row : d.packets)
        for (auto& s : row) s = Gf16(static_cast<std::uint16_t>(sym(rng)));
    return d;
}

std::vector<EvalPoint> distinct_points(std::mt19937_64& rng, int count) {
    std::vector<int> pool(48);
    for (int i = 0; i < 48; ++i) pool[i] = i + 1;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<EvalPoint> pts(count);
    for (int i = 0; i < count; ++i) pts[i].alpha = Gf16(static_cast<std::uint16_t>(pool[i]));
    return pts;
}

// 3. Encode/solve round trips exactly for every shape r,l <= 4, and
//    check_consistency agrees with the every-subset oracle on small packet
//    sets carrying one corrupted payload.
std::string check_coding() {
    std::mt19937_64 rng(0xACC'0003);
    for (int r = 1; r <= 4; ++r)
        for (int l = 1; l <= 4; ++l)
            for (int t = 0; t < 500; ++t) {
                DataValue data = random_value(rng, r, l, t);
                auto packets = encode(data, distinct_points(rng, r + 2));
                std::shuffle(packets.begin(), packets.end(), rng);
                if (!(solve(packets, r) == data))
                    return fail("round trip failed at r=" + std::to_string(r) +
                                " l=" + std::to_string(l) + " trial " + std::to_string(t));
            }

    std::uniform_int_distribution<int> sym(1, 0xFFFF);
    for (int r = 1; r <= 4; ++r)
        for (int m = r; m <= 6; ++m)
            for (int corrupt = -1; corrupt < m; ++corrupt)
                for (int t = 0; t < 3; ++t) {
                    const int l = 1 + t;
                    DataValue data = random_value(rng, r, l, 0);
                    auto packets = encode(data, distinct_points(rng, m));
                    if (corrupt >= 0) {
                        std::uniform_int_distribution<int> pos(0, l - 1);
                        auto& cell = packets[corrupt].payload[pos(rng)];
                        cell = cell + Gf16(static_cast<std::uint16_t>(sym(rng)));
                    }
                    auto got = check_consistency(packets, r);
                    auto want = subset_oracle(packets, r);
                    if (got.has_value() != want.has_value() ||
                        (got && !(got->packets == want->packets)))
                        return fail("consistency mismatch at r=" + std::to_string(r) +
                                    " m=" + std::to_string(m) +
                                    " corrupt=" + std::to_string(corrupt));
                    if (corrupt >= 0 && m > r && got)
                        return fail("corrupted set of " + std::to_string(m) +
                                    " packets passed at r=" + std::to_string(r));
                    if (corrupt < 0 && (!got || !(got->packets == data.packets)))
                        return fail("clean set rejected at r=" + std::to_string(r) +
                                    " m=" + std::to_string(m));
                }
    return {};
}

// 4. Broadcast agreement and validity over every sender, bit, faulty node,
//    and assignment of the faulty node's outgoing messages to {0, 1, silent}.
std::string check_broadcast() {
    for (int s = 0; s < 4; ++s)
        for (int bit = 0; bit <= 1; ++bit) {
            auto out = reliable_broadcast(s, bit);
            for (int v = 0; v < 4; ++v)
                if (v != s && out.decided[v] != bit)
                    return fail("honest run: receiver " + std::to_string(v) +
                                " decided " + std::to_string(out.decided[v]));
        }

    static constexpr int pow3[] = {1, 3, 9, 27};
    for (int s = 0; s < 4; ++s)
        for (int bit = 0; bit <= 1; ++bit)
            for (int x = 0; x < 4; ++x) {
                std::vector<std::pair<int, int>> slots; // (round, to) the faulty node emits
                if (x == s) {
                    for (int to = 0; to < 4; ++to)
                        if (to != s) slots.emplace_back(1, to);
                } else {
                    for (int to = 0; to < 4; ++to)
                        if (to != s && to != x) slots.emplace_back(2, to);
                }
                const int combos = pow3[slots.size()];
                for (int a = 0; a < combos; ++a) {
                    BroadcastHooks hooks;
                    hooks.faulty = x;
                    hooks.transform = [&slots, a](int round, int, int to,
                                                  int value) -> std::optional<int> {
                        for (std::size_t k = 0; k < slots.size(); ++k)
                            if (slots[k] == std::make_pair(round, to)) {
                                const int digit = a / pow3[k] % 3;
                                if (digit == 2) return std::nullopt;
                                return digit;
                            }
                        return value;
                    };
                    auto out = reliable_broadcast(s, bit, hooks);
                    int ref = -1;
                    for (int v = 0; v < 4; ++v) {
                        if (v == s || v == x) continue;
                        if (ref < 0)
                            ref = out.decided[v];
                        else if (out.decided[v] != ref)
                            return fail("agreement broken: sender " + std::to_string(s) +
                                        " faulty " + std::to_string(x) + " assignment " +
                                        std::to_string(a));
                        if (x != s && out.decided[v] != bit)
                            return fail("validity broken: sender " + std::to_string(s) +
                                        " faulty " + std::to_string(x) + " assignment " +
                                        std::to_string(a));
                    }
                }
            }
    return {};
}

std::string execution_invariants(const ScenarioConfig& cfg, const ExecutionResult& res,
                                 const std::string& tag) {
    const auto& totals = res.report.totals;
    const bool has_adversary = cfg.adversary.behavior != Behavior::None;
    const int faulty = has_adversary ? cfg.adversary.faulty : -1;

    if (totals.decided_generations != cfg.generations)
        return fail(tag + ": only " + std::to_string(totals.decided_generations) +
                    " generations decided");
    if (totals.aborted_attempts > 4)
        return fail(tag + ": " + std::to_string(totals.aborted_attempts) + " aborts");
    if (!has_adversary && totals.failures_detected != 0)
        return fail(tag + ": failure detected without an adversary");

    for (const auto& rec : res.report.attempts) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (rec.data_packets[i][j] > cfg.net.cap[i][j])
                    return fail(tag + ": link " + std::to_string(i) + "->" +
                                std::to_string(j) + " over capacity");
        if (rec.diagnosis) {
            if (!has_adversary) return fail(tag + ": diagnosis without an adversary");
            if (!rec.diagnosis->accused.contains(faulty))
                return fail(tag + ": diagnosis accused " +
                            std::to_string(rec.diagnosis->accused.members()[0]) +
                            "... missing the faulty node");
        }
    }

    for (std::size_t g = 0; g < res.truth.size(); ++g) {
        const auto& truth = res.truth[g];
        const NodeOutput* ref = nullptr;
        for (int node = 0; node < 4; ++node) {
            if (node == faulty) continue;
            const NodeOutput& out = truth.outputs[node];
            if (out.kind == NodeOutput::Kind::None)
                return fail(tag + ": node " + std::to_string(node) +
                            " undecided in generation " + std::to_string(g));
            if (!ref)
                ref = &out;
            else if (!(out == *ref))
                return fail(tag + ": fault-free nodes disagree in generation " +
                            std::to_string(g));
        }
        if (truth.fault_free_inputs_equal)
            for (int node = 0; node < 4; ++node) {
                if (node == faulty) continue;
                const NodeOutput& out = truth.outputs[node];
                if (out.kind != NodeOutput::Kind::Value || !(out.value == truth.inputs[node]))
                    return fail(tag + ": validity broken in generation " + std::to_string(g));
            }
    }
    return {};
}

// 5. Every catalogued strategy x input pattern x 50 seeds: 50 generations
//    under the invariant set (termination, consistency, validity, budget,
//    diagnosis soundness).
std::string check_containment() {
    const std::array<Behavior, 6> behaviors = {
        Behavior::None,           Behavior::Crash,
        Behavior::CorruptPayload, Behavior::EquivocateInput,
        Behavior::LieNotifications, Behavior::PartitionMimic};
    const std::array<PatternKind, 3> patterns = {PatternKind::AllEqual,
                                                 PatternKind::OneDiffers,
                                                 PatternKind::AllRandom};
    for (std::size_t si = 0; si < behaviors.size(); ++si)
        for (std::size_t pi = 0; pi < patterns.size(); ++pi)
            for (int seed = 0; seed < 50; ++seed) {
                ScenarioConfig cfg;
                cfg.net = uniform_four_node(2);
                cfg.rate = {2, 32};
                cfg.generations = 50;
                cfg.pattern.kind = patterns[pi];
                cfg.pattern.node = (seed / 4) % 4;
                cfg.seed = (si * 150 + pi * 50 + seed) * 0x9E3779B97F4A7C15ull + 1;
                const Behavior b = behaviors[si];
                if (b != Behavior::None) {
                    const int f = seed % 4;
                    cfg.adversary.behavior = b;
                    cfg.adversary.faulty = f;
                    cfg.adversary.adversary_seed = seed * 1315423911ull + si;
                    if (b == Behavior::CorruptPayload) {
                        cfg.adversary.corrupt_links = {{f, (f + 1) % 4}, {f, (f + 2) % 4}};
                        cfg.adversary.corrupt_positions = {0};
                    }
                    if (b == Behavior::PartitionMimic)
                        cfg.adversary.mimic_cut = NodeSet{(f + 1) % 4};
                }
                cfg.validate();
                auto res = run_execution(cfg);
                std::string tag = std::string(behavior_name(b)) + "/" +
                                  pattern_name(patterns[pi]) + "/seed " +
                                  std::to_string(seed);
                if (std::string err = execution_invariants(cfg, res, tag); !err.empty())
                    return err;
            }
    return {};
}

// 6. On the uniform net scaled by k (I* = 2k), fault-free runs at R = 2k - 1
//    land exactly R*c agreed bits per generation: ratio R/I* hits the ladder.
std::string check_rate_ladder() {
    const std::array<int, 4> ks = {1, 5, 10, 50};
    const std::array<double, 4> ladder = {0.5, 0.9, 0.95, 0.99};
    const int generations = 40;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const int k = ks[i];
        const int r = 2 * k - 1;
        ScenarioConfig cfg;
        cfg.net = uniform_four_node(k);
        cfg.rate = {r, 16};
        cfg.generations = generations;
        cfg.seed = 0xAD + k;
        cfg.validate();
        auto res = run_execution(cfg);
        const auto& totals = res.report.totals;
        const std::string tag = "k=" + std::to_string(k);
        if (totals.i_star != 2 * k) return fail(tag + ": i_star != 2k");
        if (totals.decided_generations != generations || totals.aborted_attempts != 0 ||
            totals.failures_detected != 0)
            return fail(tag + ": fault-free run did not stay clean");
        if (totals.t_units != generations) return fail(tag + ": t != generations");
        if (totals.b_t_bits != static_cast<long long>(generations) * r * 16)
            return fail(tag + ": agreed bits " + std::to_string(totals.b_t_bits) +
                        " != generations * R * c");
        if (totals.ratio != static_cast<double>(r) / static_cast<double>(2 * k))
            return fail(tag + ": ratio " + std::to_string(totals.ratio) + " != R/I*");
        if (totals.ratio != ladder[i])
            return fail(tag + ": ratio " + std::to_string(totals.ratio) +
                        " != " + std::to_string(ladder[i]));
    }
    return {};
}

// 7. Control traffic per generation is independent of the packet size, and
//    at c = 4096 overhead is under 5% of total traffic.
std::string check_overhead() {
    const std::array<int, 3> cs = {16, 256, 4096};
    const int generations = 30;

    auto run_at = [&](int c, Behavior b, int faulty) {
        ScenarioConfig cfg;
        cfg.net = uniform_four_node(2);
        cfg.rate = {2, c};
        cfg.generations = generations;
        cfg.seed = 0x0E0;
        if (b != Behavior::None) {
            cfg.adversary.behavior = b;
            cfg.adversary.faulty = faulty;
        }
        cfg.validate();
        return run_execution(cfg);
    };

    long long control_ref = -1;
    double overhead_at_4096 = 1.0;
    for (int c : cs) {
        auto res = run_at(c, Behavior::None, -1);
        const auto& totals = res.report.totals;
        if (totals.decided_generations != generations)
            return fail("c=" + std::to_string(c) + ": run did not finish");
        if (totals.claim_bits != 0)
            return fail("c=" + std::to_string(c) + ": claim bits in a fault-free run");
        if (control_ref < 0)
            control_ref = totals.control_bits;
        else if (totals.control_bits != control_ref)
            return fail("control bits vary with packet size: " +
                        std::to_string(control_ref) + " vs " +
                        std::to_string(totals.control_bits) + " at c=" + std::to_string(c));
        if (c == 4096) overhead_at_4096 = totals.overhead_fraction;
    }
    if (!(overhead_at_4096 < 0.05))
        return fail("overhead " + std::to_string(overhead_at_4096) + " at c=4096");

    long long crash_ref = -1;
    for (int c : cs) {
        auto res = run_at(c, Behavior::Crash, 1);
        const long long control = res.report.totals.control_bits;
        if (crash_ref < 0)
            crash_ref = control;
        else if (control != crash_ref)
            return fail("crash-run control bits vary with packet size");
    }
    return {};
}

// 8. The fuzz gate passes on the shipped binary and trips on the mutant
//    build with the final consistency check skipped.
std::string check_fuzz_gate(const std::string& cli, const std::string& mutant) {
    auto exit_code = [](const std::string& exe) {
        const std::string cmd = "\"" + exe + "\" fuzz --trials 1000 --seed 1 >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        if (status == -1 || !WIFEXITED(status)) return -1;
        return WEXITSTATUS(status);
    };
    const int ref = exit_code(cli);
    if (ref != 0) return fail("reference fuzz exited " + std::to_string(ref));
    const int mut = exit_code(mutant);
    if (mut <= 0) return fail("mutant fuzz exited " + std::to_string(mut));
    return {};
}

} // namespace

int main(int argc, char** argv) {
    std::string cli;
    std::string mutant;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--cli")
            cli = argv[i + 1];
        else if (flag == "--mutant")
            mutant = argv[i + 1];
    }
    if (cli.empty() || mutant.empty()) {
        std::fprintf(stderr, "usage: acceptance_tests --cli <binary> --mutant <binary>\n");
        return 2;
    }

    struct Check {
        const char* label;
        double budget_seconds;
        std::function<std::string()> run;
    };
    const std::vector<Check> checks = {
        {"bound equals brute-force enumeration", 5.0, check_bound_oracle},
        {"pair surplus and check-triple selection", 5.0, check_pair_surplus},
        {"coding round trip and consistency oracle", 30.0, check_coding},
        {"broadcast agreement and validity", 10.0, check_broadcast},
        {"adversary containment invariants", 120.0, check_containment},
        {"rate ratio ladder", 60.0, check_rate_ladder},
        {"control overhead amortization", 60.0, check_overhead},
        {"fuzz gate and mutant detection", 300.0,
         [&] { return check_fuzz_gate(cli, mutant); }},
    };

    int failed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        try {
            detail = checks[i].run();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (detail.empty() && secs > checks[i].budget_seconds)
            detail = "over the " + std::to_string(checks[i].budget_seconds) + "s budget";
        const bool ok = detail.empty();
        std::printf("%zu. %-42s %s (%.2fs)\n", i + 1, checks[i].label,
                    ok ? "pass" : "FAIL", secs);
        if (!ok) {
            std::printf("   %s\n", detail.c_str());
            ++failed;
        }
        std::fflush(stdout);
    }
    if (failed) std::printf("%d of 8 checks failed\n", failed);
    return failed ? 1 : 0;
}
