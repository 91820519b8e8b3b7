#include "concap/netsim.hpp"

#include <algorithm>

#include "concap/errors.hpp"
#include "concap/rbcast.hpp"

namespace concap {

void RateConfig::validate() const {
    if (packets < 1) throw ConfigError("rate: need at least one packet per generation");
    if (packet_bits < 16 || packet_bits % 16 != 0)
        throw ConfigError("rate: packet_bits must be a positive multiple of 16");
}

const char* behavior_name(Behavior b) {
    switch (b) {
    case Behavior::None: return "none";
    case Behavior::Crash: return "crash";
    case Behavior::CorruptPayload: return "corrupt_payload";
    case Behavior::EquivocateInput: return "equivocate_input";
    case Behavior::LieNotifications: return "lie_notifications";
    case Behavior::PartitionMimic: return "partition_mimic";
    case Behavior::RandomByzantine: return "random_byzantine";
    }
    throw InvariantPanic("behavior_name: bad behavior");
}

Behavior behavior_from_name(const std::string& name) {
    for (Behavior b : {Behavior::None, Behavior::Crash, Behavior::CorruptPayload,
                       Behavior::EquivocateInput, Behavior::LieNotifications,
                       Behavior::PartitionMimic, Behavior::RandomByzantine})
        if (name == behavior_name(b)) return b;
    throw ConfigError("unknown adversary behavior: " + name);
}

void AdversaryStrategy::validate(const NetworkSpec& net) const {
    if (faulty < -1 || faulty >= net.n) throw ConfigError("adversary: faulty node out of range");
    if (behavior != Behavior::None && faulty < 0)
        throw ConfigError("adversary: behavior requires a faulty node");
    if (behavior == Behavior::CorruptPayload) {
        if (corrupt_links.empty()) throw ConfigError("corrupt_payload: no target links");
        for (auto [from, to] : corrupt_links) {
            if (from != faulty) throw ConfigError("corrupt_payload: link must leave the faulty node");
            if (to < 0 || to >= net.n || to == from)
                throw ConfigError("corrupt_payload: bad link target");
        }
        if (corrupt_positions.empty()) throw ConfigError("corrupt_payload: no symbol positions");
        for (int p : corrupt_positions)
            if (p < 0) throw ConfigError("corrupt_payload: negative symbol position");
    }
    if (behavior == Behavior::PartitionMimic) {
        if (mimic_cut.empty()) throw ConfigError("partition_mimic: empty cut");
        if (mimic_cut.contains(faulty)) throw ConfigError("partition_mimic: cut contains the faulty node");
        for (int node : mimic_cut.members())
            if (node < 0 || node >= net.n) throw ConfigError("partition_mimic: node out of range");
    }
}

long long LinkMeter::total_data_packets() const {
    long long t = 0;
    for (auto& row : data_packets)
        for (long long v : row) t += v;
    return t;
}

long long LinkMeter::total_control_bits() const {
    long long t = 0;
    for (auto& row : control_bits)
        for (long long v : row) t += v;
    return t;
}

long long LinkMeter::total_claim_bits() const {
    long long t = 0;
    for (auto& row : claim_bits)
        for (long long v : row) t += v;
    return t;
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

DataValue seeded_value(std::uint64_t seed, int r, int l, int generation) {
    DataValue v = DataValue::zeros(r, l, generation);
    std::uint64_t state = seed;
    for (auto& row : v.packets)
        for (auto& sym : row) {
            state = mix64(state);
            sym = Gf16(static_cast<std::uint16_t>(state & 0xFFFF));
        }
    return v;
}

} // namespace

RoundEngine::RoundEngine(NetworkSpec net, RateConfig rate, AdversaryStrategy adversary,
                         std::uint64_t seed)
    : net_(std::move(net)), rate_(rate), adv_(std::move(adversary)),
      registry_(net_, 0), adv_rng_(mix64(adv_.adversary_seed ^ seed)) {
    rate_.validate();
    adv_.validate(net_);
    for (auto& v : inputs_) v = DataValue::zeros(rate_.packets, rate_.symbols(), 0);
    for (auto& v : equivocation_) v = inputs_[0];
}

void RoundEngine::begin_generation(int generation, std::array<DataValue, 4> inputs) {
    generation_ = generation;
    for (const auto& v : inputs) {
        v.validate_shape();
        if (v.r() != rate_.packets || v.l() != rate_.symbols())
            throw ShapeViolation("engine: input value shape does not match the rate config");
    }
    inputs_ = std::move(inputs);
    if (adv_.behavior == Behavior::EquivocateInput && adv_.faulty >= 0) {
        if (adv_.second_value) {
            DataValue v = *adv_.second_value;
            v.generation = generation;
            equivocation_[adv_.faulty] = v;
        } else {
            equivocation_[adv_.faulty] = seeded_value(
                mix64(adv_.adversary_seed ^ (0xE9u + 31ull * generation)), rate_.packets,
                rate_.symbols(), generation);
        }
    }
}

void RoundEngine::begin_attempt(int attempt) {
    attempt_ = attempt;
    phase_ = 0;
    for (auto& row : inbox_)
        for (auto& cell : row) cell.clear();
    meter_ = {};
    log_.clear();
    transcript_.clear();
    for (auto& o : outputs_) o = {};
}

const DataValue& RoundEngine::base_value(int from, int to) const {
    if (from == adv_.faulty && adv_.behavior == Behavior::EquivocateInput) {
        int target = -1;
        for (int node = 0; node < 4; ++node)
            if (node != adv_.faulty) {
                target = node;
                break;
            }
        if (to == target) return equivocation_[from];
    }
    return inputs_[from];
}

std::optional<SymbolVec> RoundEngine::rewrite_payload(int from, int to, const SymbolVec& honest) {
    if (from != adv_.faulty) return honest;
    switch (adv_.behavior) {
    case Behavior::None:
    case Behavior::EquivocateInput:
    case Behavior::LieNotifications: return honest;
    case Behavior::Crash: return std::nullopt;
    case Behavior::CorruptPayload: {
        for (auto [lf, lt] : adv_.corrupt_links)
            if (lf == from && lt == to) {
                SymbolVec out = honest;
                for (int pos : adv_.corrupt_positions)
                    out[pos % out.size()] += Gf16(1);
                return out;
            }
        return honest;
    }
    case Behavior::PartitionMimic:
        if (adv_.mimic_cut.contains(to)) return std::nullopt;
        return honest;
    case Behavior::RandomByzantine: {
        std::uint64_t roll = adv_rng_() % 100;
        if (roll < 20) {
            SymbolVec out = honest;
            std::size_t pos = adv_rng_() % out.size();
            out[pos] += Gf16(static_cast<std::uint16_t>(1 + adv_rng_() % 0xFFFF));
            return out;
        }
        if (roll < 32) return std::nullopt;
        return honest;
    }
    }
    throw InvariantPanic("rewrite_payload: bad behavior");
}

void RoundEngine::deliver(int from, int to, const EvalPoint& point, const SymbolVec& honest,
                          bool forwarded) {
    std::optional<SymbolVec> wire = rewrite_payload(from, to, honest);
    log_.push_back({phase_, from, to, point, honest, wire, forwarded});
    if (trace_traffic_) {
        RoundMessage msg;
        msg.generation = generation_;
        msg.attempt = attempt_;
        msg.phase = phase_;
        msg.from = from;
        msg.to = to;
        msg.kind = RoundMessage::Kind::Data;
        msg.point = point;
        msg.forwarded = forwarded;
        msg.delivered = wire.has_value();
        msg.bits = wire ? rate_.packet_bits : 0;
        traffic_.push_back(msg);
    }
    if (!wire) return;
    auto& used = meter_.data_packets[from][to];
    if (used + 1 > net_.cap[from][to])
        throw BudgetViolation("link data budget exceeded on link " + std::to_string(from) +
                              "->" + std::to_string(to));
    ++used;
    CodedPacket pkt;
    pkt.generation = generation_;
    pkt.point = point;
    pkt.payload = std::move(*wire);
    inbox_[to][from].push_back(std::move(pkt));
}

void RoundEngine::send_fresh(int from, int to) {
    send_fresh_value(from, to, base_value(from, to));
}

void RoundEngine::send_fresh_value(int from, int to, const DataValue& value) {
    ++phase_;
    for (const EvalPoint& p : registry_.link_points(from, to)) {
        CodedPacket coded = encode_one(value, p);
        deliver(from, to, p, coded.payload, false);
    }
}

void RoundEngine::forward(int relay, const std::vector<int>& srcs, int to, int limit) {
    ++phase_;
    if (limit > net_.cap[relay][to])
        throw BudgetViolation("forward limit exceeds link capacity");
    std::vector<CodedPacket> pool;
    for (int src : srcs) {
        const auto& part = view(relay, src);
        pool.insert(pool.end(), part.begin(), part.end());
    }
    std::sort(pool.begin(), pool.end(),
              [](const CodedPacket& x, const CodedPacket& y) {
                  return x.point.alpha.value() < y.point.alpha.value();
              });
    int count = std::min<int>(limit, static_cast<int>(pool.size()));
    for (int i = 0; i < count; ++i) deliver(relay, to, pool[i].point, pool[i].payload, true);
}

const std::vector<CodedPacket>& RoundEngine::view(int node, int from) const {
    static const std::vector<CodedPacket> kEmpty;
    if (node == adv_.faulty && adv_.behavior == Behavior::PartitionMimic &&
        adv_.mimic_cut.contains(from))
        return kEmpty;
    return inbox_[node][from];
}

int RoundEngine::rewrite_bit(NotifKind kind, int honest_bit, bool& withheld) {
    withheld = false;
    switch (adv_.behavior) {
    case Behavior::None:
    case Behavior::CorruptPayload:
    case Behavior::EquivocateInput:
    case Behavior::PartitionMimic: return honest_bit;
    case Behavior::Crash:
        withheld = true;
        return honest_bit;
    case Behavior::LieNotifications:
        if (adv_.lie_kinds.empty() || adv_.lie_kinds.count(kind)) return 1 - honest_bit;
        return honest_bit;
    case Behavior::RandomByzantine: {
        std::uint64_t roll = adv_rng_() % 100;
        if (roll < 30) return 1 - honest_bit;
        if (roll < 40) withheld = true;
        return honest_bit;
    }
    }
    throw InvariantPanic("rewrite_bit: bad behavior");
}

int RoundEngine::notify(NotifKind kind, int sender, const std::vector<SourceSpec>& sources,
                        const DataValue* derived) {
    ++phase_;
    bool full = true;
    bool per_source_ok = true;
    std::vector<CodedPacket> pool;
    for (const auto& s : sources) {
        const auto& part = view(sender, s.from);
        if (static_cast<int>(part.size()) != s.expected) full = false;
        if (static_cast<int>(part.size()) >= rate_.packets &&
            !check_consistency(part, rate_.packets).has_value())
            per_source_ok = false;
        pool.insert(pool.end(), part.begin(), part.end());
    }

    int honest_bit;
    if (kind == NotifKind::DirectVerdict || kind == NotifKind::ThroughVerdict) {
        const DataValue& value = derived ? *derived : inputs_[sender];
        honest_bit = (full && verify_against(pool, value)) ? 1 : 0;
    } else if (kind == NotifKind::ThroughConsistency) {
        // Sources may carry different legitimate values; judge each on its own.
        honest_bit = (full && per_source_ok) ? 1 : 0;
    } else {
        bool consistent = static_cast<int>(pool.size()) < rate_.packets ||
                          check_consistency(pool, rate_.packets).has_value();
        honest_bit = (full && consistent) ? 1 : 0;
    }
#ifdef CONCAP_MUTANT_SKIP_FINAL_CHECK
    if (kind == NotifKind::FinalConsistency) honest_bit = 1;
#endif

    int wire_bit = honest_bit;
    bool withhold_own = false;
    if (sender == adv_.faulty) wire_bit = rewrite_bit(kind, honest_bit, withhold_own);

    BroadcastHooks hooks;
    hooks.faulty = adv_.faulty;
    if (adv_.faulty >= 0) {
        hooks.transform = [&](int round, int from, int to, int value) -> std::optional<int> {
            (void)from;
            if (round == 1) {
                if (withhold_own) return std::nullopt;
                return wire_bit;
            }
            switch (adv_.behavior) {
            case Behavior::Crash: return std::nullopt;
            case Behavior::PartitionMimic:
                if (adv_.mimic_cut.contains(to)) return std::nullopt;
                return value;
            case Behavior::RandomByzantine: {
                std::uint64_t roll = adv_rng_() % 100;
                if (roll < 20) return 1 - value;
                if (roll < 30) return std::nullopt;
                return value;
            }
            default: return value;
            }
        };
    }

    BroadcastOutcome out = reliable_broadcast(sender, honest_bit, hooks);
    for (const auto& msg : out.messages) {
        if (msg.bit) meter_.control_bits[msg.from][msg.to] += broadcast_cost_bits();
        if (trace_traffic_) {
            RoundMessage rec;
            rec.generation = generation_;
            rec.attempt = attempt_;
            rec.phase = phase_;
            rec.from = msg.from;
            rec.to = msg.to;
            rec.kind = RoundMessage::Kind::Control;
            rec.delivered = msg.bit.has_value();
            rec.bits = msg.bit ? broadcast_cost_bits() : 0;
            traffic_.push_back(rec);
        }
    }

    int agreed = -1;
    for (int node = 0; node < 4; ++node) {
        if (node == sender || node == adv_.faulty) continue;
        if (agreed < 0)
            agreed = out.decided[node];
        else if (out.decided[node] != agreed)
            throw InvariantPanic("broadcast agreement violated among fault-free receivers");
    }
    if (sender != adv_.faulty && out.decided[sender] != agreed)
        throw InvariantPanic("broadcast validity violated for a fault-free sender");

    transcript_.push_back({kind, sender, sources, derived != nullptr, agreed});
    return agreed;
}

void RoundEngine::decide_own(int node) {
    outputs_[node] = {NodeOutput::Kind::Value, inputs_[node]};
}

void RoundEngine::decide(int node, const DataValue& value) {
    outputs_[node] = {NodeOutput::Kind::Value, value};
}

void RoundEngine::decide_default(int node) {
    outputs_[node] = {NodeOutput::Kind::Default,
                      DataValue::zeros(rate_.packets, rate_.symbols(), generation_)};
}

void RoundEngine::meter_broadcast(int sender, std::array<std::array<long long, 4>, 4>& cells,
                                  long long bits) {
    for (int i = 0; i < 4; ++i) {
        if (i == sender) continue;
        cells[sender][i] += bits;
        for (int j = 0; j < 4; ++j)
            if (j != sender && j != i) cells[i][j] += bits;
    }
}

ClaimSet RoundEngine::collect_claims() {
    ++phase_;
    ClaimSet claims;

    auto coin_deny = [&]() { return adv_rng_() % 2 == 0; };

    for (const auto& rec : log_) {
        WireKey key{rec.from, rec.to, rec.point.alpha.value()};

        // sender side
        if (rec.from == adv_.faulty) {
            switch (adv_.behavior) {
            case Behavior::Crash: break;
            case Behavior::CorruptPayload:
            case Behavior::PartitionMimic: claims[rec.from].sent[key] = rec.honest; break;
            case Behavior::RandomByzantine:
                claims[rec.from].sent[key] = coin_deny() ? rec.honest : rec.wire.value_or(rec.honest);
                break;
            default:
                if (rec.wire) claims[rec.from].sent[key] = *rec.wire;
                break;
            }
        } else if (rec.wire) {
            claims[rec.from].sent[key] = *rec.wire;
        }

        // receiver side
        if (!rec.wire) continue;
        if (rec.to == adv_.faulty) {
            switch (adv_.behavior) {
            case Behavior::Crash: break;
            case Behavior::PartitionMimic:
                if (!adv_.mimic_cut.contains(rec.from)) claims[rec.to].received[key] = *rec.wire;
                break;
            case Behavior::RandomByzantine:
                if (!coin_deny()) claims[rec.to].received[key] = *rec.wire;
                break;
            default: claims[rec.to].received[key] = *rec.wire; break;
            }
        } else {
            claims[rec.to].received[key] = *rec.wire;
        }
    }

    for (int node = 0; node < 4; ++node) {
        long long entries = static_cast<long long>(claims[node].sent.size()) +
                            static_cast<long long>(claims[node].received.size());
        long long bits = 16 + entries * (33 + 16LL * rate_.symbols());
        meter_broadcast(node, meter_.claim_bits, bits);
        if (trace_traffic_) {
            for (int i = 0; i < 4; ++i) {
                if (i == node) continue;
                RoundMessage rec;
                rec.generation = generation_;
                rec.attempt = attempt_;
                rec.phase = phase_;
                rec.from = node;
                rec.to = i;
                rec.kind = RoundMessage::Kind::Claim;
                rec.bits = static_cast<int>(bits);
                traffic_.push_back(rec);
            }
        }
    }
    return claims;
}

} // namespace concap
