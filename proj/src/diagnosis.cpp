#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "concap/errors.hpp"
#include "concap/protocol.hpp"

namespace concap {

namespace {

// Thrown the moment a node's claims contradict themselves or a reliably
// agreed bit: that is proof of guilt, no further evidence needed.
struct AuditEnd {
    int accused;
};

struct DeferredVerdict {
    int sender = -1;
    bool full = false;
    int recorded = 0;
    std::vector<CodedPacket> pool; // the sender's claimed evidence
};

// Replays a mode script over the claim set instead of live links. A node's
// audited view of a link is exactly what that node claims arrived there (each
// link carries one batch per attempt, so link and batch identify each other);
// honest nodes' recomputed bits therefore match the transcript bit for bit.
class AuditMedium final : public Medium {
public:
    AuditMedium(const NetworkSpec& net, int r, const PointRegistry& registry,
                const Transcript& transcript, const ClaimSet& claims)
        : net_(net), r_(r), registry_(registry), transcript_(transcript), claims_(claims) {}

    const NetworkSpec& net() const override { return net_; }
    int packets_per_value() const override { return r_; }

    void send_fresh(int from, int to) override { audit_fresh(from, to, nullptr); }

    void send_fresh_value(int from, int to, const DataValue& value) override {
        audit_fresh(from, to, &value);
    }

    void forward(int relay, const std::vector<int>& srcs, int to, int limit) override {
        std::vector<CodedPacket> pool;
        for (int src : srcs) {
            const auto& part = view(relay, src);
            pool.insert(pool.end(), part.begin(), part.end());
        }
        std::sort(pool.begin(), pool.end(), [](const CodedPacket& x, const CodedPacket& y) {
            return x.point.alpha.value() < y.point.alpha.value();
        });
        int count = std::min<int>(limit, static_cast<int>(pool.size()));
        std::set<WireKey> expected;
        for (int i = 0; i < count; ++i) {
            const CodedPacket& held = pool[i];
            WireKey key{relay, to, held.point.alpha.value()};
            expected.insert(key);
            auto sent = claims_[relay].sent.find(key);
            // A forward is a copy of an acknowledged receipt: claiming less,
            // or a different payload, is self-contradiction.
            if (sent == claims_[relay].sent.end()) throw AuditEnd{relay};
            visited_sent[relay].insert(key);
            if (sent->second != held.payload) throw AuditEnd{relay};
        }
        sweep_link(relay, to, expected);
    }

    const std::vector<CodedPacket>& view(int node, int from) const override {
        return inbox_[node][from];
    }

    int notify(NotifKind kind, int sender, const std::vector<SourceSpec>& sources,
               const DataValue* derived) override {
        if (cursor_ >= transcript_.size())
            throw InvariantPanic("audit: transcript exhausted before the script finished");
        const BitRecord& rec = transcript_[cursor_++];
        if (rec.kind != kind || rec.sender != sender)
            throw InvariantPanic("audit: transcript does not line up with the script");

        bool full = true;
        bool per_source_ok = true;
        std::vector<CodedPacket> pool;
        for (const auto& s : sources) {
            const auto& part = view(sender, s.from);
            if (static_cast<int>(part.size()) != s.expected) full = false;
            if (static_cast<int>(part.size()) >= r_ && !check_consistency(part, r_).has_value())
                per_source_ok = false;
            pool.insert(pool.end(), part.begin(), part.end());
        }

        if (kind == NotifKind::ThroughConsistency) {
            int expected = (full && per_source_ok) ? 1 : 0;
            if (expected != rec.bit) throw AuditEnd{sender};
        } else if (kind == NotifKind::FinalConsistency) {
            bool consistent = static_cast<int>(pool.size()) < r_ ||
                              check_consistency(pool, r_).has_value();
            int expected = (full && consistent) ? 1 : 0;
            if (expected != rec.bit) throw AuditEnd{sender};
        } else if (derived) {
            // Judged against a value that is itself a function of the claims.
            int expected = (full && verify_against(pool, *derived)) ? 1 : 0;
            if (expected != rec.bit) throw AuditEnd{sender};
        } else {
            deferred.push_back({sender, full, rec.bit, pool});
        }
        return rec.bit;
    }

    void decide_own(int) override {}
    void decide(int, const DataValue&) override {}
    void decide_default(int) override {}

    std::set<std::pair<int, int>> disputes;
    std::array<std::map<std::uint16_t, SymbolVec>, 4> fresh_claims;
    std::vector<DeferredVerdict> deferred;
    std::array<std::set<WireKey>, 4> visited_sent;
    std::array<std::set<WireKey>, 4> visited_received;

private:
    void dispute(int x, int y) { disputes.insert({std::min(x, y), std::max(x, y)}); }

    // Consume everything `to` says arrived on link from->to: each claimed
    // receipt feeds the receiver's audited view and is cross-checked against
    // the sender's story; expected packets the receiver denies are disputes.
    void sweep_link(int from, int to, const std::set<WireKey>& expected) {
        const auto& received = claims_[to].received;
        auto it = received.lower_bound(WireKey{from, to, 0});
        auto end = received.upper_bound(WireKey{from, to, 0xFFFF});
        for (; it != end; ++it) {
            const WireKey& key = it->first;
            visited_received[to].insert(key);
            auto sent = claims_[from].sent.find(key);
            if (sent == claims_[from].sent.end() || sent->second != it->second)
                dispute(from, to);
            CodedPacket pkt;
            pkt.point.alpha = Gf16(key.alpha);
            pkt.payload = it->second;
            inbox_[to][from].push_back(std::move(pkt));
        }
        for (const WireKey& key : expected)
            if (!received.contains(key)) dispute(from, to);
    }

    void audit_fresh(int from, int to, const DataValue* value) {
        std::set<WireKey> expected;
        for (const EvalPoint& p : registry_.link_points(from, to)) {
            WireKey key{from, to, p.alpha.value()};
            expected.insert(key);
            auto sent = claims_[from].sent.find(key);
            // Every prescribed fresh slot must carry a claimed payload.
            if (sent == claims_[from].sent.end()) throw AuditEnd{from};
            visited_sent[from].insert(key);
            if (value) {
                CodedPacket expect = encode_one(*value, p);
                if (sent->second != expect.payload) throw AuditEnd{from};
            } else {
                fresh_claims[from][p.alpha.value()] = sent->second;
            }
        }
        sweep_link(from, to, expected);
    }

    const NetworkSpec& net_;
    int r_;
    const PointRegistry& registry_;
    const Transcript& transcript_;
    const ClaimSet& claims_;
    std::array<std::array<std::vector<CodedPacket>, 4>, 4> inbox_;
    std::size_t cursor_ = 0;
};

} // namespace

DiagnosisOutcome diagnose(const NetworkSpec& net, int r, const PointRegistry& registry,
                          Mode mode, const RoleMap& roles, const Transcript& transcript,
                          const ClaimSet& claims) {
    AuditMedium audit(net, r, registry, transcript, claims);
    try {
        ScriptResult res = run_mode_script(mode, roles, audit);
        if (res.status != ScriptStatus::Failure)
            throw InvariantPanic("audit: replay did not reproduce the live failure");
    } catch (const AuditEnd& end) {
        return DiagnosisOutcome::identified(end.accused);
    }

    NodeSet accused;

    // A node's claimed fresh sends plus every receive it acknowledged with a
    // positive verdict all allegedly encode one and the same value. Enough of
    // them pin that value; then each private verdict becomes checkable.
    for (int node = 0; node < 4; ++node) {
        std::map<std::uint16_t, SymbolVec> u = audit.fresh_claims[node];
        for (const auto& dv : audit.deferred) {
            if (dv.sender != node || dv.recorded != 1) continue;
            if (!dv.full) {
                accused.add(node); // vouched "equal" for an incomplete set
                continue;
            }
            for (const auto& pkt : dv.pool) u[pkt.point.alpha.value()] = pkt.payload;
        }
        if (static_cast<int>(u.size()) < r) continue;
        std::vector<CodedPacket> uvec;
        uvec.reserve(u.size());
        for (const auto& [alpha, payload] : u) {
            CodedPacket pkt;
            pkt.point.alpha = Gf16(alpha);
            pkt.payload = payload;
            uvec.push_back(std::move(pkt));
        }
        auto pinned = check_consistency(uvec, r);
        if (!pinned) {
            accused.add(node); // claims to have vouched for two different values
            continue;
        }
        for (const auto& dv : audit.deferred) {
            if (dv.sender != node) continue;
            int expected = (dv.full && verify_against(dv.pool, *pinned)) ? 1 : 0;
            if (expected != dv.recorded) accused.add(node);
        }
    }

    // Claims the plan never asked for: an invented send is self-incriminating,
    // an invented receipt is one node's word against the alleged sender's.
    for (int node = 0; node < 4; ++node) {
        for (const auto& [key, payload] : claims[node].sent)
            if (!audit.visited_sent[node].contains(key)) accused.add(node);
        for (const auto& [key, payload] : claims[node].received)
            if (!audit.visited_received[node].contains(key))
                audit.disputes.insert({std::min(key.from, node), std::max(key.from, node)});
    }

    if (accused.size() > 1)
        throw InvariantPanic("diagnosis: several nodes proved faulty, but at most one can be");
    if (accused.size() == 1) return DiagnosisOutcome::identified(accused.members()[0]);

    if (audit.disputes.empty())
        throw NoDispute("diagnosis: a detected failure left no dispute and no accusation");

    std::array<int, 4> degree{};
    for (auto [x, y] : audit.disputes) {
        ++degree[x];
        ++degree[y];
    }
    int heavy = -1;
    for (int node = 0; node < 4; ++node) {
        if (degree[node] < 2) continue;
        if (heavy >= 0)
            throw InvariantPanic("diagnosis: dispute graph implicates two nodes");
        heavy = node;
    }
    if (heavy >= 0) return DiagnosisOutcome::identified(heavy);
    if (audit.disputes.size() != 1)
        throw InvariantPanic("diagnosis: disjoint disputes cannot stem from one faulty node");
    auto [x, y] = *audit.disputes.begin();
    return DiagnosisOutcome::pair(x, y);
}

} // namespace concap
