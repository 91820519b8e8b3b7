#include <cstdio>
#include <random>

#include "concap/capgraph.hpp"
#include "concap/errors.hpp"
#include "concap/netsim.hpp"

namespace concap {

const char* pattern_name(PatternKind k) {
    switch (k) {
    case PatternKind::AllEqual: return "all_equal";
    case PatternKind::OneDiffers: return "one_differs";
    case PatternKind::AllRandom: return "all_random";
    case PatternKind::Explicit: return "explicit";
    }
    throw InvariantPanic("pattern_name: bad kind");
}

PatternKind pattern_from_name(const std::string& name) {
    for (PatternKind k : {PatternKind::AllEqual, PatternKind::OneDiffers, PatternKind::AllRandom,
                          PatternKind::Explicit})
        if (name == pattern_name(k)) return k;
    throw ConfigError("unknown input pattern: " + name);
}

void ScenarioConfig::validate() const {
    net.validate();
    if (net.n != 4 || net.f != 1)
        throw ConfigError("scenario: the protocol runs on four nodes with one fault");
    for (int i = 0; i < net.n; ++i)
        for (int j = 0; j < net.n; ++j)
            if (i != j && net.cap[i][j] < 1)
                throw ConfigError("scenario: every directed link needs capacity at least 1");
    rate.validate();
    long long i_star = four_node_bound(net);
    if (rate.packets >= i_star)
        throw ConfigError("scenario: rate " + std::to_string(rate.packets) +
                          " is not below the capacity bound " + std::to_string(i_star));
    if (generations < 0) throw ConfigError("scenario: negative generation count");
    if (pattern.kind == PatternKind::OneDiffers && (pattern.node < 0 || pattern.node > 3))
        throw ConfigError("scenario: one_differs node out of range");
    if (pattern.kind == PatternKind::Explicit) {
        if (static_cast<int>(pattern.values.size()) < generations)
            throw ConfigError("scenario: explicit pattern needs one input row per generation");
        for (const auto& row : pattern.values)
            for (const auto& v : row) {
                v.validate_shape();
                if (v.r() != rate.packets || v.l() != rate.symbols())
                    throw ConfigError("scenario: explicit input shape does not match the rate");
            }
    }
    adversary.validate(net);
    if (adversary.second_value) {
        adversary.second_value->validate_shape();
        if (adversary.second_value->r() != rate.packets ||
            adversary.second_value->l() != rate.symbols())
            throw ConfigError("scenario: second value shape does not match the rate");
    }
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

DataValue random_value(std::mt19937_64& rng, int r, int l, int generation) {
    DataValue v = DataValue::zeros(r, l, generation);
    for (auto& row : v.packets)
        for (auto& sym : row) sym = Gf16(static_cast<std::uint16_t>(rng() & 0xFFFF));
    return v;
}

} // namespace

std::array<DataValue, 4> generation_inputs(const ScenarioConfig& config, int generation) {
    const int r = config.rate.packets;
    const int l = config.rate.symbols();
    std::mt19937_64 rng(mix64(config.seed ^ (0xA11CEull + 977ull * generation)));

    switch (config.pattern.kind) {
    case PatternKind::AllEqual: {
        DataValue v = random_value(rng, r, l, generation);
        return {v, v, v, v};
    }
    case PatternKind::OneDiffers: {
        DataValue common = random_value(rng, r, l, generation);
        DataValue odd = random_value(rng, r, l, generation);
        if (odd == common) odd.packets[0][0] += Gf16(1);
        std::array<DataValue, 4> out{common, common, common, common};
        out[config.pattern.node] = odd;
        return out;
    }
    case PatternKind::AllRandom: {
        std::array<DataValue, 4> out{DataValue::zeros(r, l, generation),
                                     DataValue::zeros(r, l, generation),
                                     DataValue::zeros(r, l, generation),
                                     DataValue::zeros(r, l, generation)};
        for (auto& v : out) v = random_value(rng, r, l, generation);
        return out;
    }
    case PatternKind::Explicit: {
        if (generation >= static_cast<int>(config.pattern.values.size()))
            throw ConfigError("explicit pattern: no inputs for generation " +
                              std::to_string(generation));
        std::array<DataValue, 4> out = config.pattern.values[generation];
        for (auto& v : out) v.generation = generation;
        return out;
    }
    }
    throw InvariantPanic("generation_inputs: bad pattern kind");
}

std::string decisions_digest(const std::array<NodeOutput, 4>& outputs) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    auto feed = [&h](std::uint64_t byte) {
        h ^= byte & 0xFF;
        h *= 0x100000001B3ull;
    };
    for (const auto& out : outputs) {
        feed(static_cast<std::uint64_t>(out.kind));
        if (out.kind == NodeOutput::Kind::None) continue;
        feed(static_cast<std::uint64_t>(out.value.r()));
        feed(static_cast<std::uint64_t>(out.value.l()));
        for (const auto& row : out.value.packets)
            for (const auto& sym : row) {
                feed(sym.value());
                feed(sym.value() >> 8);
            }
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

ExecutionResult run_execution(const ScenarioConfig& config, const ExecutionOptions& opts) {
    config.validate();

    const long long i_star = four_node_bound(config.net);
    const int r = config.rate.packets;
    const long long c = config.rate.packet_bits;

    auto [tx, ty, tz] = select_check_triple(config.net, r);
    ModeState state;
    state.mode = Mode::Undetected2Eq;
    state.roles = RoleMap::from_triple(tx, ty, tz);

    RoundEngine engine(config.net, config.rate, config.adversary, config.seed);
    engine.set_trace_traffic(opts.trace_traffic);

    const bool has_adversary = config.adversary.behavior != Behavior::None;
    const int faulty = has_adversary ? config.adversary.faulty : -1;

    ExecutionResult result;
    ThroughputReport& report = result.report;
    report.scenario = config;
    ReportTotals& totals = report.totals;
    totals.i_star = i_star;
    totals.i_star_bits = i_star * c;

    int total_transitions = 0;

    for (int g = 0; g < config.generations; ++g) {
        std::array<DataValue, 4> inputs = generation_inputs(config, g);
        engine.begin_generation(g, inputs);

        GenerationTruth truth;
        truth.inputs = inputs;
        truth.fault_free_inputs_equal = true;
        const DataValue* ref = nullptr;
        for (int node = 0; node < 4; ++node) {
            if (node == faulty) continue;
            if (!ref)
                ref = &inputs[node];
            else if (!(inputs[node] == *ref))
                truth.fault_free_inputs_equal = false;
        }

        for (int attempt = 1;; ++attempt) {
            engine.begin_attempt(attempt);
            ++totals.t_units;

            ScriptResult res = run_mode_script(state.mode, state.roles, engine);

            AttemptRecord rec;
            rec.generation = g;
            rec.attempt = attempt;
            rec.mode = state.mode;

            if (res.status == ScriptStatus::Decided) {
                rec.default_decision = res.default_decision;
                rec.decisions_digest = decisions_digest(engine.outputs());
                rec.data_packets = engine.meter().data_packets;
                rec.control_bits = engine.meter().control_bits;
                rec.claim_bits = engine.meter().claim_bits;
                report.attempts.push_back(std::move(rec));
                truth.outputs = engine.outputs();
                ++totals.decided_generations;
                break;
            }

            rec.aborted = true;
            ++totals.aborted_attempts;
            if (res.status == ScriptStatus::Failure) {
                rec.failure_detected = true;
                ++totals.failures_detected;
                ClaimSet claims = engine.collect_claims();
                DiagnosisOutcome outcome =
                    diagnose(config.net, r, engine.registry(), state.mode, state.roles,
                             engine.transcript(), claims);
                rec.diagnosis = outcome;
                state = advance_mode(state, TransitionEvent{EvDiagnosed{outcome}});
            } else {
                state = advance_mode(state, *res.event);
            }
            if (++total_transitions > 4)
                throw InvariantPanic("more than four aborts in one execution");

            rec.data_packets = engine.meter().data_packets;
            rec.control_bits = engine.meter().control_bits;
            rec.claim_bits = engine.meter().claim_bits;
            report.attempts.push_back(std::move(rec));
        }

        result.truth.push_back(std::move(truth));
    }

    for (const auto& rec : report.attempts) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                totals.data_bits += rec.data_packets[i][j] * c;
                totals.control_bits += rec.control_bits[i][j];
                totals.claim_bits += rec.claim_bits[i][j];
            }
    }
    totals.b_t_bits = totals.decided_generations * r * c;
    totals.final_mode = state.mode;
    if (totals.t_units > 0) {
        totals.rate = static_cast<double>(totals.b_t_bits) / static_cast<double>(totals.t_units);
        totals.ratio = static_cast<double>(totals.b_t_bits) /
                       static_cast<double>(totals.t_units * totals.i_star_bits);
    }
    totals.overhead_fraction = overhead_fraction(report);

    if (opts.trace_traffic) report.traffic = engine.traffic();
    result.final_state = state;
    return result;
}

double overhead_fraction(const ThroughputReport& report) {
    const auto& t = report.totals;
    long long overhead = t.control_bits + t.claim_bits;
    long long all = overhead + t.data_bits;
    if (all == 0) return 0.0;
    return static_cast<double>(overhead) / static_cast<double>(all);
}

} // namespace concap
