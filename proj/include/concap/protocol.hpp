#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "concap/network.hpp"
#include "concap/rscode.hpp"

namespace concap {

enum class Mode {
    Undetected2Eq = 0,
    Undetected1Eq1Neq = 1,
    Undetected2Neq = 2,
    Detected = 3,
    Identified = 4,
};

const char* mode_name(Mode m);
Mode mode_from_name(const std::string& name);

// Physical node for each of the roles A, B, C, D (indices 0..3).
struct RoleMap {
    std::array<int, 4> phys{0, 1, 2, 3};

    int a() const { return phys[0]; }
    int b() const { return phys[1]; }
    int c() const { return phys[2]; }
    int d() const { return phys[3]; }

    // A=x, B=y, C=z, D = the remaining node.
    static RoleMap from_triple(int x, int y, int z);
    bool is_bijection() const;

    bool operator==(const RoleMap&) const = default;
};

struct ModeState {
    Mode mode = Mode::Undetected2Eq;
    RoleMap roles;
    NodeSet suspects; // 2 in Detected, 1 in Identified, else empty

    void validate() const;
};

// 1-bit notifications, tagged by what they assert. The tag decides how the
// diagnosis audit treats the bit: consistency bits and derived-value verdicts
// are recomputable from claims; verdicts against a private input are not and
// feed the union analysis instead.
enum class NotifKind {
    DirectVerdict,
    ThroughConsistency,
    ThroughVerdict,
    FinalConsistency,
};

const char* notif_kind_name(NotifKind k);

struct SourceSpec {
    int from = -1;
    int expected = 0; // nominal packet count for a full receipt

    bool operator==(const SourceSpec&) const = default;
};

struct BitRecord {
    NotifKind kind;
    int sender = -1;
    std::vector<SourceSpec> sources;
    bool value_derived = false; // verdict judged against a claims-derivable value
    int bit = 0;               // the reliably agreed value
};

using Transcript = std::vector<BitRecord>;

// Abstract transport the mode scripts run against. The live engine moves
// real packets; the diagnosis auditor replays the same script over broadcast
// claims. Keeping both behind one interface keeps the executed plan and the
// audited plan structurally identical by construction.
class Medium {
public:
    virtual ~Medium() = default;

    virtual const NetworkSpec& net() const = 0;
    virtual int packets_per_value() const = 0;

    // `from` encodes its input at every registry point of link (from, to).
    virtual void send_fresh(int from, int to) = 0;
    // Same, but coded from an explicitly supplied value (reconstructions).
    virtual void send_fresh_value(int from, int to, const DataValue& value) = 0;
    // `relay` re-sends packets received from `srcs`, merged in registry slot
    // order, at most `limit` (and never beyond cap[relay][to]).
    virtual void forward(int relay, const std::vector<int>& srcs, int to, int limit) = 0;

    // Packets `node` holds from immediate sender `from` this attempt.
    virtual const std::vector<CodedPacket>& view(int node, int from) const = 0;

    // Reliably broadcast one bit computed from `sender`'s view of `sources`.
    // `derived` non-null: verdict against that value; null + verdict kind:
    // verdict against the sender's own input; consistency kinds ignore it.
    virtual int notify(NotifKind kind, int sender, const std::vector<SourceSpec>& sources,
                       const DataValue* derived) = 0;

    virtual void decide_own(int node) = 0;
    virtual void decide(int node, const DataValue& value) = 0;
    virtual void decide_default(int node) = 0;
};

struct CheckVerdict {
    enum class Relation { Equiv, NotEquiv } relation = Relation::NotEquiv;
    int via = -1; // -1: direct
    bool failure_detected = false;
};

struct ReconstructedValue {
    DataValue value;
    int at = -1;
};

struct ThroughSpec {
    bool send_fresh_xy = true;  // emit the direct x<->y exchange (off when reused)
    bool count_direct_x = true; // include view(x, y) in x's checked set
    bool count_direct_y = true;
    const DataValue* x_value = nullptr; // non-null: x judges against a derived value
    const DataValue* y_value = nullptr;
};

CheckVerdict check_directly(Medium& m, int x, int y);
CheckVerdict check_through(Medium& m, int x, int y, int z, const ThroughSpec& spec = {});
CheckVerdict check_value_through(Medium& m, int x, const ReconstructedValue& reconstructed,
                                 int y, int z);

struct DiagnosisOutcome {
    enum class Kind { SuspectPair, IdentifiedNode } kind = Kind::SuspectPair;
    NodeSet accused; // size 2 for SuspectPair, size 1 for IdentifiedNode

    static DiagnosisOutcome pair(int x, int y);
    static DiagnosisOutcome identified(int node);
    bool operator==(const DiagnosisOutcome&) const = default;
};

struct EvPairMismatch {
    bool ab_equiv = false; // which direct pair still agreed
};
struct EvBothMismatch {};
struct EvDirectMismatch {};
struct EvDiagnosed {
    DiagnosisOutcome outcome;
};
using TransitionEvent = std::variant<EvPairMismatch, EvBothMismatch, EvDirectMismatch, EvDiagnosed>;

enum class ScriptStatus { Decided, Transition, Failure };

struct ScriptResult {
    ScriptStatus status = ScriptStatus::Decided;
    std::optional<TransitionEvent> event;
    // Default-decided generations still count as decisions.
    bool default_decision = false;
};

// One generation attempt in the given mode over the given medium.
ScriptResult run_mode_script(Mode mode, const RoleMap& roles, Medium& m);

ScriptResult run_undetected_2eq(const RoleMap& roles, Medium& m);
ScriptResult run_undetected_1eq1neq(const RoleMap& roles, Medium& m);
ScriptResult run_undetected_2neq(const RoleMap& roles, Medium& m);
ScriptResult run_detected(const RoleMap& roles, Medium& m);
ScriptResult run_identified(const RoleMap& roles, Medium& m);

ModeState advance_mode(const ModeState& current, const TransitionEvent& event);

// --- diagnosis -------------------------------------------------------------

// Everything a node asserts after a failure: for each wire packet it claims
// involvement with, keyed by (link, alpha), the payload it says it sent or
// received. Missing key: claims no involvement.
struct WireKey {
    int from = -1;
    int to = -1;
    std::uint16_t alpha = 0;

    auto operator<=>(const WireKey&) const = default;
};

struct NodeClaims {
    std::map<WireKey, SymbolVec> sent;
    std::map<WireKey, SymbolVec> received;
};

using ClaimSet = std::array<NodeClaims, 4>;

// Replays the failing attempt's script over the broadcast claims, collecting
// dispute edges and self-inconsistencies, then applies the accusation rules.
DiagnosisOutcome diagnose(const NetworkSpec& net, int r, const PointRegistry& registry,
                          Mode mode, const RoleMap& roles, const Transcript& transcript,
                          const ClaimSet& claims);

} // namespace concap
