#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "concap/network.hpp"
#include "concap/protocol.hpp"
#include "concap/rscode.hpp"

namespace concap {

struct RateConfig {
    int packets = 1;     // R: data packets per generation
    int packet_bits = 16; // c: bits per packet, multiple of 16

    int symbols() const { return packet_bits / 16; } // L
    void validate() const;
};

enum class Behavior {
    None,
    Crash,
    CorruptPayload,
    EquivocateInput,
    LieNotifications,
    PartitionMimic,
    RandomByzantine,
};

const char* behavior_name(Behavior b);
Behavior behavior_from_name(const std::string& name);

struct AdversaryStrategy {
    int faulty = -1; // -1: nobody
    Behavior behavior = Behavior::None;

    // corrupt_payload
    std::vector<std::pair<int, int>> corrupt_links;
    std::vector<int> corrupt_positions;
    // equivocate_input: fixed second value; absent -> seeded per generation
    std::optional<DataValue> second_value;
    // lie_notifications: which notification kinds get flipped (empty: all)
    std::set<NotifKind> lie_kinds;
    // partition_mimic: the nodes it stops talking to / listening to
    NodeSet mimic_cut;
    // random_byzantine
    std::uint64_t adversary_seed = 0;

    void validate(const NetworkSpec& net) const;
};

// Per-attempt link usage. Claims ride the broadcast links but are metered
// apart from notification bits so control cost stays size-independent.
struct LinkMeter {
    std::array<std::array<long long, 4>, 4> data_packets{};
    std::array<std::array<long long, 4>, 4> control_bits{};
    std::array<std::array<long long, 4>, 4> claim_bits{};

    long long total_data_packets() const;
    long long total_control_bits() const;
    long long total_claim_bits() const;
};

struct RoundMessage {
    int generation = 0;
    int attempt = 0;
    int phase = 0;
    int from = -1;
    int to = -1;
    enum class Kind { Data, Control, Claim } kind = Kind::Data;
    // Data messages
    EvalPoint point;
    bool forwarded = false;
    bool delivered = true;
    // Control/Claim messages
    int bits = 0;
};

struct NodeOutput {
    enum class Kind { None, Value, Default } kind = Kind::None;
    DataValue value;

    bool operator==(const NodeOutput&) const = default;
};

// Synchronous deterministic transport for one generation attempt at a time.
// Implements the script-facing Medium and applies the adversary's rewrites
// to the faulty node's outgoing packets, notification inputs, and relays.
class RoundEngine final : public Medium {
public:
    RoundEngine(NetworkSpec net, RateConfig rate, AdversaryStrategy adversary,
                std::uint64_t seed);

    void begin_generation(int generation, std::array<DataValue, 4> inputs);
    void begin_attempt(int attempt);

    // Medium interface
    const NetworkSpec& net() const override { return net_; }
    int packets_per_value() const override { return rate_.packets; }
    void send_fresh(int from, int to) override;
    void send_fresh_value(int from, int to, const DataValue& value) override;
    void forward(int relay, const std::vector<int>& srcs, int to, int limit) override;
    const std::vector<CodedPacket>& view(int node, int from) const override;
    int notify(NotifKind kind, int sender, const std::vector<SourceSpec>& sources,
               const DataValue* derived) override;
    void decide_own(int node) override;
    void decide(int node, const DataValue& value) override;
    void decide_default(int node) override;

    // After a failure: every node broadcasts its claims (metered), yielding
    // the agreed transcript the auditor consumes.
    ClaimSet collect_claims();

    const LinkMeter& meter() const { return meter_; }
    const Transcript& transcript() const { return transcript_; }
    const PointRegistry& registry() const { return registry_; }
    const std::array<NodeOutput, 4>& outputs() const { return outputs_; }
    const std::array<DataValue, 4>& inputs() const { return inputs_; }
    const std::vector<RoundMessage>& traffic() const { return traffic_; }
    int generation() const { return generation_; }

private:
    struct LogRecord {
        int phase;
        int from;
        int to;
        EvalPoint point;
        SymbolVec honest;                // payload an honest node would put on the wire
        std::optional<SymbolVec> wire;   // actual payload; nullopt: withheld
        bool forwarded;
    };

    const DataValue& base_value(int from, int to) const;
    std::optional<SymbolVec> rewrite_payload(int from, int to, const SymbolVec& honest);
    void deliver(int from, int to, const EvalPoint& point, const SymbolVec& honest,
                 bool forwarded);
    int rewrite_bit(NotifKind kind, int honest_bit, bool& withheld);
    void meter_broadcast(int sender, std::array<std::array<long long, 4>, 4>& cells,
                         long long bits);

    NetworkSpec net_;
    RateConfig rate_;
    AdversaryStrategy adv_;
    PointRegistry registry_;
    std::mt19937_64 adv_rng_;

    int generation_ = 0;
    int attempt_ = 0;
    int phase_ = 0;
    std::array<DataValue, 4> inputs_;
    std::array<DataValue, 4> equivocation_;
    std::array<std::array<std::vector<CodedPacket>, 4>, 4> inbox_; // [node][from]
    LinkMeter meter_;
    std::vector<LogRecord> log_;
    Transcript transcript_;
    std::array<NodeOutput, 4> outputs_;
    std::vector<RoundMessage> traffic_;
    bool trace_traffic_ = true;

public:
    void set_trace_traffic(bool on) { trace_traffic_ = on; }
};

// --- execution -------------------------------------------------------------

enum class PatternKind { AllEqual, OneDiffers, AllRandom, Explicit };

const char* pattern_name(PatternKind k);
PatternKind pattern_from_name(const std::string& name);

struct InputPattern {
    PatternKind kind = PatternKind::AllEqual;
    int node = 0; // one_differs
    std::vector<std::array<DataValue, 4>> values; // explicit, one entry per generation
};

struct ScenarioConfig {
    NetworkSpec net;
    RateConfig rate;
    int generations = 1;
    InputPattern pattern;
    AdversaryStrategy adversary;
    std::uint64_t seed = 0;

    void validate() const;
};

struct AttemptRecord {
    int generation = 0;
    int attempt = 0;
    Mode mode = Mode::Undetected2Eq;
    bool aborted = false;
    bool failure_detected = false;
    bool default_decision = false;
    std::optional<DiagnosisOutcome> diagnosis;
    std::array<std::array<long long, 4>, 4> data_packets{};
    std::array<std::array<long long, 4>, 4> control_bits{};
    std::array<std::array<long long, 4>, 4> claim_bits{};
    std::string decisions_digest; // empty on aborted attempts
};

struct GenerationTruth {
    std::array<DataValue, 4> inputs;
    std::array<NodeOutput, 4> outputs;
    bool fault_free_inputs_equal = false;
};

struct ReportTotals {
    long long b_t_bits = 0;
    long long t_units = 0;
    long long decided_generations = 0;
    long long aborted_attempts = 0;
    long long failures_detected = 0;
    long long data_bits = 0;
    long long control_bits = 0;
    long long claim_bits = 0;
    long long i_star = 0;       // packets
    long long i_star_bits = 0;  // I* * c
    double rate = 0.0;          // bits per time unit
    double ratio = 0.0;         // rate / i_star_bits
    double overhead_fraction = 0.0;
    Mode final_mode = Mode::Undetected2Eq;
};

struct ThroughputReport {
    ScenarioConfig scenario;
    std::vector<AttemptRecord> attempts;
    ReportTotals totals;
    std::vector<RoundMessage> traffic; // present when traced
};

struct ExecutionResult {
    ThroughputReport report;
    std::vector<GenerationTruth> truth;
    ModeState final_state;
};

struct ExecutionOptions {
    bool trace_traffic = false;
};

std::array<DataValue, 4> generation_inputs(const ScenarioConfig& config, int generation);

ExecutionResult run_execution(const ScenarioConfig& config, const ExecutionOptions& opts = {});

double overhead_fraction(const ThroughputReport& report);

std::string decisions_digest(const std::array<NodeOutput, 4>& outputs);

} // namespace concap
