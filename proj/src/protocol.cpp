#include "concap/protocol.hpp"

#include <algorithm>

#include "concap/errors.hpp"

namespace concap {

const char* mode_name(Mode m) {
    switch (m) {
    case Mode::Undetected2Eq: return "undetected_2eq";
    case Mode::Undetected1Eq1Neq: return "undetected_1eq1neq";
    case Mode::Undetected2Neq: return "undetected_2neq";
    case Mode::Detected: return "detected";
    case Mode::Identified: return "identified";
    }
    throw InvariantPanic("mode_name: bad mode");
}

Mode mode_from_name(const std::string& name) {
    for (Mode m : {Mode::Undetected2Eq, Mode::Undetected1Eq1Neq, Mode::Undetected2Neq,
                   Mode::Detected, Mode::Identified})
        if (name == mode_name(m)) return m;
    throw ConfigError("unknown mode name: " + name);
}

const char* notif_kind_name(NotifKind k) {
    switch (k) {
    case NotifKind::DirectVerdict: return "direct_verdict";
    case NotifKind::ThroughConsistency: return "through_consistency";
    case NotifKind::ThroughVerdict: return "through_verdict";
    case NotifKind::FinalConsistency: return "final_consistency";
    }
    throw InvariantPanic("notif_kind_name: bad kind");
}

RoleMap RoleMap::from_triple(int x, int y, int z) {
    RoleMap rm;
    rm.phys = {x, y, z, 0 + 1 + 2 + 3 - x - y - z};
    if (!rm.is_bijection()) throw InvariantPanic("role map: not a bijection");
    return rm;
}

bool RoleMap::is_bijection() const {
    std::array<bool, 4> seen{};
    for (int p : phys) {
        if (p < 0 || p > 3 || seen[p]) return false;
        seen[p] = true;
    }
    return true;
}

void ModeState::validate() const {
    if (!roles.is_bijection()) throw InvariantPanic("mode state: roles not a bijection");
    int want = mode == Mode::Detected ? 2 : mode == Mode::Identified ? 1 : 0;
    if (suspects.size() != want)
        throw InvariantPanic("mode state: suspect set size does not match mode");
}

DiagnosisOutcome DiagnosisOutcome::pair(int x, int y) {
    if (x == y) throw InvariantPanic("diagnosis: pair of one node");
    DiagnosisOutcome o;
    o.kind = Kind::SuspectPair;
    o.accused = NodeSet{x, y};
    return o;
}

DiagnosisOutcome DiagnosisOutcome::identified(int node) {
    DiagnosisOutcome o;
    o.kind = Kind::IdentifiedNode;
    o.accused = NodeSet{node};
    return o;
}

namespace {

int fwd_count(const NetworkSpec& net, int x, int z, int y) {
    // packets of x that z can pass on to y
    return std::min(net.cap[x][z], net.cap[z][y]);
}

std::vector<CodedPacket> merged_view(Medium& m, int node, const std::vector<SourceSpec>& sources) {
    std::vector<CodedPacket> pool;
    for (const auto& s : sources) {
        const auto& part = m.view(node, s.from);
        pool.insert(pool.end(), part.begin(), part.end());
    }
    return pool;
}

} // namespace

CheckVerdict check_directly(Medium& m, int x, int y) {
    const auto& net = m.net();
    m.send_fresh(x, y);
    m.send_fresh(y, x);
    int bx = m.notify(NotifKind::DirectVerdict, x, {{y, net.cap[y][x]}}, nullptr);
    int by = m.notify(NotifKind::DirectVerdict, y, {{x, net.cap[x][y]}}, nullptr);
    CheckVerdict v;
    v.via = -1;
    v.relation = (bx && by) ? CheckVerdict::Relation::Equiv : CheckVerdict::Relation::NotEquiv;
    return v;
}

CheckVerdict check_through(Medium& m, int x, int y, int z, const ThroughSpec& spec) {
    const auto& net = m.net();
    if (spec.send_fresh_xy) {
        m.send_fresh(x, y);
        m.send_fresh(y, x);
    }
    if (spec.x_value)
        m.send_fresh_value(x, z, *spec.x_value);
    else
        m.send_fresh(x, z);
    if (spec.y_value)
        m.send_fresh_value(y, z, *spec.y_value);
    else
        m.send_fresh(y, z);
    m.forward(z, {x}, y, net.cap[z][y]);
    m.forward(z, {y}, x, net.cap[z][x]);

    std::vector<SourceSpec> at_x, at_y;
    if (spec.count_direct_x) at_x.push_back({y, net.cap[y][x]});
    at_x.push_back({z, fwd_count(net, y, z, x)});
    if (spec.count_direct_y) at_y.push_back({x, net.cap[x][y]});
    at_y.push_back({z, fwd_count(net, x, z, y)});

    int cx = m.notify(NotifKind::ThroughConsistency, x, at_x, nullptr);
    int cy = m.notify(NotifKind::ThroughConsistency, y, at_y, nullptr);
    int cz = m.notify(NotifKind::ThroughConsistency, z,
                      {{x, net.cap[x][z]}, {y, net.cap[y][z]}}, nullptr);
    CheckVerdict v;
    v.via = z;
    if (!(cx && cy && cz)) {
        v.failure_detected = true;
        return v;
    }
    int vx = m.notify(NotifKind::ThroughVerdict, x, at_x, spec.x_value);
    int vy = m.notify(NotifKind::ThroughVerdict, y, at_y, spec.y_value);
    v.relation = (vx && vy) ? CheckVerdict::Relation::Equiv : CheckVerdict::Relation::NotEquiv;
    return v;
}

CheckVerdict check_value_through(Medium& m, int x, const ReconstructedValue& reconstructed,
                                 int y, int z) {
    ThroughSpec spec;
    spec.send_fresh_xy = false;
    spec.count_direct_x = true;  // x keeps judging y's earlier fresh packets
    spec.count_direct_y = false; // y has no direct commitment of the reconstruction
    spec.x_value = &reconstructed.value;
    return check_through(m, x, y, z, spec);
}

namespace {

ScriptResult decided(bool default_used = false) {
    return {ScriptStatus::Decided, std::nullopt, default_used};
}

ScriptResult transition(TransitionEvent ev) {
    return {ScriptStatus::Transition, std::move(ev), false};
}

ScriptResult failure() {
    return {ScriptStatus::Failure, std::nullopt, false};
}

void decide_all_default(Medium& m) {
    for (int node = 0; node < 4; ++node) m.decide_default(node);
}

bool equiv(const CheckVerdict& v) { return v.relation == CheckVerdict::Relation::Equiv; }

} // namespace

ScriptResult run_undetected_2eq(const RoleMap& roles, Medium& m) {
    const auto& net = m.net();
    const int a = roles.a(), b = roles.b(), c = roles.c(), d = roles.d();

    CheckVerdict ab = check_directly(m, a, b);
    CheckVerdict bc = check_directly(m, b, c);
    if (!equiv(ab) && !equiv(bc)) return transition(EvBothMismatch{});
    if (!equiv(ab) || !equiv(bc)) return transition(EvPairMismatch{equiv(ab)});

    CheckVerdict ac = check_through(m, a, c, d);
    if (ac.failure_detected) return failure();
    // A≡B, B≡C but A≢C through D contradicts transitivity: someone lied.
    if (!equiv(ac)) return failure();

    m.send_fresh(b, d);
    int fin = m.notify(NotifKind::FinalConsistency, d,
                       {{a, net.cap[a][d]}, {c, net.cap[c][d]}, {b, net.cap[b][d]}}, nullptr);
    if (!fin) return failure();

    m.decide_own(a);
    m.decide_own(b);
    m.decide_own(c);
    auto pool = merged_view(m, d, {{a, 0}, {c, 0}, {b, 0}});
    m.decide(d, solve(pool, m.packets_per_value()));
    return decided();
}

ScriptResult run_undetected_1eq1neq(const RoleMap& roles, Medium& m) {
    const auto& net = m.net();
    const int a = roles.a(), b = roles.b(), c = roles.c(), d = roles.d();

    CheckVerdict ab = check_directly(m, a, b);
    if (!equiv(ab)) return transition(EvDirectMismatch{});

    // Through C on top of the step-1 exchange; the A-B links stay quiet.
    ThroughSpec reuse;
    reuse.send_fresh_xy = false;
    CheckVerdict via_c = check_through(m, a, b, c, reuse);
    if (via_c.failure_detected) return failure();
    if (!equiv(via_c)) return failure(); // contradicts the direct Equiv

    ReconstructedValue cprime;
    cprime.at = c;
    cprime.value = solve(merged_view(m, c, {{a, 0}, {b, 0}}), m.packets_per_value());

    CheckVerdict vc = check_value_through(m, c, cprime, a, d);
    if (vc.failure_detected) return failure();
    // C' was solved from A's and B's own packets; a mismatch with A via an
    // honest channel is impossible, so NotEquiv means someone lied.
    if (!equiv(vc)) return failure();

    m.send_fresh(b, d);
    int fin = m.notify(NotifKind::FinalConsistency, d,
                       {{a, net.cap[a][d]}, {c, net.cap[c][d]}, {b, net.cap[b][d]}}, nullptr);
    if (!fin) return failure();

    m.decide_own(a);
    m.decide_own(b);
    m.decide(c, cprime.value);
    auto pool = merged_view(m, d, {{a, 0}, {c, 0}, {b, 0}});
    m.decide(d, solve(pool, m.packets_per_value()));
    return decided();
}

namespace {

struct DualChannel {
    bool failure = false;
    bool eq_via_b = false;
    bool eq_via_d = false;
};

// (A,C) checked through B and through D, sharing one direct A<->C exchange.
DualChannel dual_channel_check(const RoleMap& roles, Medium& m) {
    const auto& net = m.net();
    const int a = roles.a(), b = roles.b(), c = roles.c(), d = roles.d();

    m.send_fresh(a, c);
    m.send_fresh(a, b);
    m.send_fresh(a, d);
    m.send_fresh(c, a);
    m.send_fresh(c, b);
    m.send_fresh(c, d);
    m.forward(b, {a}, c, net.cap[b][c]);
    m.forward(b, {c}, a, net.cap[b][a]);
    m.forward(d, {a}, c, net.cap[d][c]);
    m.forward(d, {c}, a, net.cap[d][a]);

    DualChannel res;
    for (int z : {b, d}) {
        std::vector<SourceSpec> at_a{{c, net.cap[c][a]}, {z, fwd_count(net, c, z, a)}};
        std::vector<SourceSpec> at_c{{a, net.cap[a][c]}, {z, fwd_count(net, a, z, c)}};
        int ca = m.notify(NotifKind::ThroughConsistency, a, at_a, nullptr);
        int cc = m.notify(NotifKind::ThroughConsistency, c, at_c, nullptr);
        int cz = m.notify(NotifKind::ThroughConsistency, z,
                          {{a, net.cap[a][z]}, {c, net.cap[c][z]}}, nullptr);
        if (!(ca && cc && cz)) {
            res.failure = true;
            return res;
        }
        int va = m.notify(NotifKind::ThroughVerdict, a, at_a, nullptr);
        int vc = m.notify(NotifKind::ThroughVerdict, c, at_c, nullptr);
        (z == b ? res.eq_via_b : res.eq_via_d) = va && vc;
    }
    return res;
}

} // namespace

ScriptResult run_undetected_2neq(const RoleMap& roles, Medium& m) {
    const auto& net = m.net();
    const int a = roles.a(), b = roles.b(), c = roles.c(), d = roles.d();

    DualChannel ch = dual_channel_check(roles, m);
    if (ch.failure) return failure();
    if (!ch.eq_via_b && !ch.eq_via_d) {
        decide_all_default(m);
        return decided(true);
    }
    if (ch.eq_via_b != ch.eq_via_d) return failure(); // channels disagree: someone lied

    // Both channels agree: relays swap their holdings so each can solve.
    m.forward(b, {a, c}, d, net.cap[b][d]);
    m.forward(d, {a, c}, b, net.cap[d][b]);
    int n_bd = std::min(net.cap[a][b] + net.cap[c][b], net.cap[b][d]);
    int n_db = std::min(net.cap[a][d] + net.cap[c][d], net.cap[d][b]);
    int fb = m.notify(NotifKind::FinalConsistency, b,
                      {{a, net.cap[a][b]}, {c, net.cap[c][b]}, {d, n_db}}, nullptr);
    int fd = m.notify(NotifKind::FinalConsistency, d,
                      {{a, net.cap[a][d]}, {c, net.cap[c][d]}, {b, n_bd}}, nullptr);
    if (!(fb && fd)) return failure();

    m.decide_own(a);
    m.decide_own(c);
    m.decide(b, solve(merged_view(m, b, {{a, 0}, {c, 0}, {d, 0}}), m.packets_per_value()));
    m.decide(d, solve(merged_view(m, d, {{a, 0}, {c, 0}, {b, 0}}), m.packets_per_value()));
    return decided();
}

ScriptResult run_detected(const RoleMap& roles, Medium& m) {
    DualChannel ch = dual_channel_check(roles, m);
    if (ch.failure) return failure();
    if (!ch.eq_via_b && !ch.eq_via_d) {
        decide_all_default(m);
        return decided(true);
    }
    if (ch.eq_via_b != ch.eq_via_d) return failure();

    // Suspects solve from the trusted pair alone; no exchange between them.
    m.decide_own(roles.a());
    m.decide_own(roles.c());
    m.decide(roles.b(),
             solve(merged_view(m, roles.b(), {{roles.a(), 0}, {roles.c(), 0}}),
                   m.packets_per_value()));
    m.decide(roles.d(),
             solve(merged_view(m, roles.d(), {{roles.a(), 0}, {roles.c(), 0}}),
                   m.packets_per_value()));
    return decided();
}

ScriptResult run_identified(const RoleMap& roles, Medium& m) {
    const int a = roles.a(), c = roles.c(), d = roles.d();

    CheckVerdict ac = check_through(m, a, c, d);
    if (ac.failure_detected)
        throw InvariantPanic("identified mode: consistency failure among cleared nodes");
    if (!equiv(ac)) {
        decide_all_default(m);
        return decided(true);
    }
    m.decide_own(a);
    m.decide_own(c);
    m.decide(d, solve(merged_view(m, d, {{a, 0}, {c, 0}}), m.packets_per_value()));
    m.decide_default(roles.b()); // excluded node; output unconstrained
    return decided();
}

ScriptResult run_mode_script(Mode mode, const RoleMap& roles, Medium& m) {
    switch (mode) {
    case Mode::Undetected2Eq: return run_undetected_2eq(roles, m);
    case Mode::Undetected1Eq1Neq: return run_undetected_1eq1neq(roles, m);
    case Mode::Undetected2Neq: return run_undetected_2neq(roles, m);
    case Mode::Detected: return run_detected(roles, m);
    case Mode::Identified: return run_identified(roles, m);
    }
    throw InvariantPanic("run_mode_script: bad mode");
}

namespace {

RoleMap roles_for_detected(const NodeSet& suspects) {
    std::vector<int> trusted;
    for (int node = 0; node < 4; ++node)
        if (!suspects.contains(node)) trusted.push_back(node);
    if (trusted.size() != 2) throw InvariantPanic("detected roles: need exactly 2 suspects");
    RoleMap rm;
    rm.phys = {trusted[0], suspects.members()[0], trusted[1], suspects.members()[1]};
    return rm;
}

RoleMap roles_for_identified(int bad) {
    std::vector<int> rest;
    for (int node = 0; node < 4; ++node)
        if (node != bad) rest.push_back(node);
    RoleMap rm;
    rm.phys = {rest[0], bad, rest[1], rest[2]};
    return rm;
}

} // namespace

ModeState advance_mode(const ModeState& current, const TransitionEvent& event) {
    current.validate();
    ModeState next = current;

    if (const auto* pm = std::get_if<EvPairMismatch>(&event)) {
        if (current.mode != Mode::Undetected2Eq)
            throw BackwardTransition("pair-mismatch event outside undetected_2eq");
        next.mode = Mode::Undetected1Eq1Neq;
        if (!pm->ab_equiv) {
            // (B,C) is the agreeing pair: relabel it to (A,B).
            RoleMap rm = current.roles;
            std::swap(rm.phys[0], rm.phys[2]);
            next.roles = rm;
        }
    } else if (std::get_if<EvBothMismatch>(&event)) {
        if (current.mode != Mode::Undetected2Eq)
            throw BackwardTransition("both-mismatch event outside undetected_2eq");
        next.mode = Mode::Undetected2Neq;
    } else if (std::get_if<EvDirectMismatch>(&event)) {
        if (current.mode != Mode::Undetected1Eq1Neq)
            throw BackwardTransition("direct-mismatch event outside undetected_1eq1neq");
        next.mode = Mode::Undetected2Neq;
    } else if (const auto* dg = std::get_if<EvDiagnosed>(&event)) {
        if (current.mode == Mode::Identified)
            throw BackwardTransition("diagnosis event in identified mode");
        DiagnosisOutcome outcome = dg->outcome;
        if (current.mode == Mode::Detected) {
            // Narrow the standing pair with the fresh accusation.
            NodeSet common;
            for (int node : outcome.accused.members())
                if (current.suspects.contains(node)) common.add(node);
            if (common.size() != 1)
                throw InvariantPanic("detected diagnosis: accusations do not pin one suspect");
            outcome = DiagnosisOutcome::identified(common.members()[0]);
        }
        if (outcome.kind == DiagnosisOutcome::Kind::IdentifiedNode) {
            next.mode = Mode::Identified;
            next.suspects = outcome.accused;
            next.roles = roles_for_identified(outcome.accused.members()[0]);
        } else {
            next.mode = Mode::Detected;
            next.suspects = outcome.accused;
            next.roles = roles_for_detected(outcome.accused);
        }
    }

    if (static_cast<int>(next.mode) <= static_cast<int>(current.mode))
        throw BackwardTransition("mode transitions must move forward");
    next.validate();
    return next;
}

} // namespace concap
