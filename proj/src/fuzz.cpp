#include "concap/fuzz.hpp"

#include <random>
#include <sstream>

#include "concap/capgraph.hpp"
#include "concap/config.hpp"
#include "concap/errors.hpp"

namespace concap {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

int pick(std::mt19937_64& rng, int lo, int hi) { // inclusive
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Each check appends to `why`; an empty string means the trial held up.
void check_invariants(const ScenarioConfig& config, const ExecutionResult& res,
                      std::string& why) {
    std::ostringstream out;
    const auto& totals = res.report.totals;
    const bool has_adversary = config.adversary.behavior != Behavior::None;
    const int faulty = has_adversary ? config.adversary.faulty : -1;

    if (totals.decided_generations != config.generations)
        out << "not every generation decided; ";
    if (totals.aborted_attempts > 4) out << "more than four aborted attempts; ";
    if (totals.t_units > config.generations + 4) out << "time budget exceeded; ";

    for (const auto& rec : res.report.attempts) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (rec.data_packets[i][j] > config.net.cap[i][j])
                    out << "link budget exceeded on " << i << "->" << j << "; ";
        if (rec.diagnosis) {
            if (!has_adversary)
                out << "diagnosis produced without an adversary; ";
            else if (!rec.diagnosis->accused.contains(faulty))
                out << "diagnosis missed the faulty node; ";
            if (rec.diagnosis->kind == DiagnosisOutcome::Kind::IdentifiedNode &&
                has_adversary && rec.diagnosis->accused.members()[0] != faulty)
                out << "diagnosis identified an honest node; ";
        }
        if (rec.failure_detected && !has_adversary) out << "failure detected without an adversary; ";
    }

    // A partition faulty node starves a link some mode script checks for
    // fullness; a non-default decision can only get past that check after a
    // failure re-routed the execution. Silence plus a real decision means a
    // completeness check was skipped.
    if (config.adversary.behavior == Behavior::PartitionMimic &&
        totals.failures_detected == 0) {
        bool decided_real = false;
        for (const auto& truth : res.truth)
            for (int node = 0; node < 4; ++node)
                if (node != faulty && truth.outputs[node].kind == NodeOutput::Kind::Value)
                    decided_real = true;
        if (decided_real) out << "partition withholding went undetected; ";
    }

    for (std::size_t g = 0; g < res.truth.size(); ++g) {
        const auto& truth = res.truth[g];
        const NodeOutput* ref = nullptr;
        for (int node = 0; node < 4; ++node) {
            if (node == faulty) continue;
            const NodeOutput& out_n = truth.outputs[node];
            if (out_n.kind == NodeOutput::Kind::None) {
                out << "node " << node << " never decided in generation " << g << "; ";
                continue;
            }
            if (!ref)
                ref = &out_n;
            else if (!(out_n == *ref))
                out << "fault-free nodes disagree in generation " << g << "; ";
        }
        if (truth.fault_free_inputs_equal) {
            for (int node = 0; node < 4; ++node) {
                if (node == faulty) continue;
                const NodeOutput& out_n = truth.outputs[node];
                if (out_n.kind != NodeOutput::Kind::Value ||
                    !(out_n.value == truth.inputs[node]))
                    out << "validity broken for node " << node << " in generation " << g << "; ";
            }
        }
    }
    why = out.str();
}

} // namespace

ScenarioConfig fuzz_scenario(std::uint64_t seed, long long trial, int generations) {
    std::mt19937_64 rng(mix64(seed ^ (0xF0220ull + 1315423911ull * trial)));

    ScenarioConfig config;
    while (true) {
        std::vector<std::vector<int>> cap(4, std::vector<int>(4, 0));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) cap[i][j] = pick(rng, 1, 10);
        config.net = NetworkSpec::make(4, 1, std::move(cap));
        if (four_node_bound(config.net) >= 2) break; // need room for R >= 1
    }

    long long i_star = four_node_bound(config.net);
    config.rate.packets = pick(rng, 1, static_cast<int>(i_star - 1));
    config.rate.packet_bits = 16 * pick(rng, 1, 2);
    config.generations = generations;
    config.seed = rng();

    switch (pick(rng, 0, 2)) {
    case 0: config.pattern.kind = PatternKind::AllEqual; break;
    case 1:
        config.pattern.kind = PatternKind::OneDiffers;
        config.pattern.node = pick(rng, 0, 3);
        break;
    default: config.pattern.kind = PatternKind::AllRandom; break;
    }

    AdversaryStrategy& adv = config.adversary;
    switch (pick(rng, 0, 6)) {
    case 0: adv.behavior = Behavior::None; break;
    case 1: adv.behavior = Behavior::Crash; break;
    case 2: adv.behavior = Behavior::CorruptPayload; break;
    case 3: adv.behavior = Behavior::EquivocateInput; break;
    case 4: adv.behavior = Behavior::LieNotifications; break;
    case 5: adv.behavior = Behavior::PartitionMimic; break;
    default: adv.behavior = Behavior::RandomByzantine; break;
    }
    if (adv.behavior != Behavior::None) {
        adv.faulty = pick(rng, 0, 3);
        adv.adversary_seed = rng();
    }
    if (adv.behavior == Behavior::CorruptPayload) {
        int nlinks = pick(rng, 1, 2);
        std::vector<int> others;
        for (int node = 0; node < 4; ++node)
            if (node != adv.faulty) others.push_back(node);
        for (int k = 0; k < nlinks; ++k)
            adv.corrupt_links.emplace_back(adv.faulty, others[pick(rng, 0, 2)]);
        int npos = pick(rng, 1, 2);
        for (int k = 0; k < npos; ++k)
            adv.corrupt_positions.push_back(
                pick(rng, 0, config.rate.packets * config.rate.symbols() - 1));
    }
    if (adv.behavior == Behavior::LieNotifications && pick(rng, 0, 1) == 1) {
        const NotifKind all[] = {NotifKind::DirectVerdict, NotifKind::ThroughConsistency,
                                 NotifKind::ThroughVerdict, NotifKind::FinalConsistency};
        int count = pick(rng, 1, 3);
        for (int k = 0; k < count; ++k) adv.lie_kinds.insert(all[pick(rng, 0, 3)]);
    }
    if (adv.behavior == Behavior::PartitionMimic) {
        std::vector<int> others;
        for (int node = 0; node < 4; ++node)
            if (node != adv.faulty) others.push_back(node);
        int mask = pick(rng, 1, 7);
        for (int k = 0; k < 3; ++k)
            if (mask & (1 << k)) adv.mimic_cut.add(others[k]);
    }
    return config;
}

FuzzSummary run_fuzz(const FuzzOptions& opts) {
    if (opts.trials < 1) throw SizeViolation("fuzz: need at least one trial");

    FuzzSummary summary;
    for (long long trial = 0; trial < opts.trials; ++trial) {
        ScenarioConfig config = fuzz_scenario(opts.seed, trial, opts.generations);
        std::string why;
        try {
            ExecutionResult res = run_execution(config);
            check_invariants(config, res, why);
        } catch (const std::exception& e) {
            why = std::string("execution threw: ") + e.what();
        }
        ++summary.trials_run;
        if (!why.empty()) {
            summary.violation = FuzzViolation{trial, why, scenario_to_json_text(config)};
            break;
        }
    }
    return summary;
}

} // namespace concap
