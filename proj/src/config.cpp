#include "concap/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "concap/errors.hpp"

namespace concap {

using nlohmann::json;

namespace {

json value_to_json(const DataValue& v) {
    json rows = json::array();
    for (const auto& row : v.packets) {
        json r = json::array();
        for (const auto& sym : row) r.push_back(sym.value());
        rows.push_back(std::move(r));
    }
    return rows;
}

DataValue value_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("value: expected a non-empty array of rows");
    DataValue v;
    for (const auto& row : j) {
        if (!row.is_array()) throw ConfigError("value: each packet must be an array of symbols");
        SymbolVec symbols;
        for (const auto& s : row) symbols.emplace_back(s.get<std::uint16_t>());
        v.packets.push_back(std::move(symbols));
    }
    v.validate_shape();
    return v;
}

json meter_to_json(const std::array<std::array<long long, 4>, 4>& cells) {
    json rows = json::array();
    for (const auto& row : cells) {
        json r = json::array();
        for (long long v : row) r.push_back(v);
        rows.push_back(std::move(r));
    }
    return rows;
}

NetworkSpec network_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("network: expected an object");
    if (!j.contains("n") || !j.contains("f") || !j.contains("cap"))
        throw ConfigError("network: need fields n, f, cap");
    int n = j.at("n").get<int>();
    int f = j.at("f").get<int>();
    const json& cap = j.at("cap");
    if (!cap.is_array() || static_cast<int>(cap.size()) != n)
        throw ConfigError("network: cap must be an n-row matrix");
    std::vector<std::vector<int>> rows;
    for (const auto& row : cap) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ConfigError("network: cap must be an n x n matrix");
        rows.push_back(row.get<std::vector<int>>());
    }
    NetworkSpec net = NetworkSpec::make(n, f, std::move(rows));
    net.validate();
    return net;
}

json network_to_json(const NetworkSpec& net) {
    json cap = json::array();
    for (const auto& row : net.cap) cap.push_back(row);
    return json{{"n", net.n}, {"f", net.f}, {"cap", std::move(cap)}};
}

json scenario_to_json(const ScenarioConfig& config) {
    json j;
    j["network"] = network_to_json(config.net);
    j["rate"] = {{"packets", config.rate.packets}, {"packet_bits", config.rate.packet_bits}};
    j["generations"] = config.generations;
    j["seed"] = config.seed;

    json pattern;
    pattern["kind"] = pattern_name(config.pattern.kind);
    if (config.pattern.kind == PatternKind::OneDiffers) pattern["node"] = config.pattern.node;
    if (config.pattern.kind == PatternKind::Explicit) {
        json values = json::array();
        for (const auto& row : config.pattern.values) {
            json four = json::array();
            for (const auto& v : row) four.push_back(value_to_json(v));
            values.push_back(std::move(four));
        }
        pattern["values"] = std::move(values);
    }
    j["input_pattern"] = std::move(pattern);

    json adv;
    adv["faulty"] = config.adversary.faulty;
    adv["behavior"] = behavior_name(config.adversary.behavior);
    adv["adversary_seed"] = config.adversary.adversary_seed;
    if (!config.adversary.corrupt_links.empty()) {
        json links = json::array();
        for (auto [from, to] : config.adversary.corrupt_links)
            links.push_back(json::array({from, to}));
        adv["corrupt_links"] = std::move(links);
    }
    if (!config.adversary.corrupt_positions.empty())
        adv["corrupt_positions"] = config.adversary.corrupt_positions;
    if (config.adversary.second_value)
        adv["second_value"] = value_to_json(*config.adversary.second_value);
    if (!config.adversary.lie_kinds.empty()) {
        json kinds = json::array();
        for (NotifKind k : config.adversary.lie_kinds) kinds.push_back(notif_kind_name(k));
        adv["lie_kinds"] = std::move(kinds);
    }
    if (!config.adversary.mimic_cut.empty()) adv["mimic_cut"] = config.adversary.mimic_cut.members();
    j["adversary"] = std::move(adv);
    return j;
}

NotifKind notif_kind_from_name(const std::string& name) {
    for (NotifKind k : {NotifKind::DirectVerdict, NotifKind::ThroughConsistency,
                        NotifKind::ThroughVerdict, NotifKind::FinalConsistency})
        if (name == notif_kind_name(k)) return k;
    throw ConfigError("unknown notification kind: " + name);
}

ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
    ScenarioConfig config;
    if (!j.contains("network")) throw ConfigError("scenario: missing network");
    config.net = network_from_json(j.at("network"));

    if (j.contains("rate")) {
        const json& rate = j.at("rate");
        config.rate.packets = rate.value("packets", 1);
        config.rate.packet_bits = rate.value("packet_bits", 16);
    }
    config.generations = j.value("generations", 1);
    config.seed = j.value("seed", std::uint64_t{0});

    if (j.contains("input_pattern")) {
        const json& pattern = j.at("input_pattern");
        config.pattern.kind = pattern_from_name(pattern.value("kind", "all_equal"));
        config.pattern.node = pattern.value("node", 0);
        if (pattern.contains("values")) {
            for (const auto& row : pattern.at("values")) {
                if (!row.is_array() || row.size() != 4)
                    throw ConfigError("input_pattern: each explicit entry needs four values");
                std::array<DataValue, 4> four;
                for (int i = 0; i < 4; ++i) four[i] = value_from_json(row[i]);
                config.pattern.values.push_back(std::move(four));
            }
        }
    }

    if (j.contains("adversary")) {
        const json& adv = j.at("adversary");
        config.adversary.faulty = adv.value("faulty", -1);
        config.adversary.behavior = behavior_from_name(adv.value("behavior", "none"));
        config.adversary.adversary_seed = adv.value("adversary_seed", std::uint64_t{0});
        if (adv.contains("corrupt_links"))
            for (const auto& link : adv.at("corrupt_links")) {
                if (!link.is_array() || link.size() != 2)
                    throw ConfigError("adversary: each corrupt link is a [from, to] pair");
                config.adversary.corrupt_links.emplace_back(link[0].get<int>(),
                                                            link[1].get<int>());
            }
        if (adv.contains("corrupt_positions"))
            config.adversary.corrupt_positions =
                adv.at("corrupt_positions").get<std::vector<int>>();
        if (adv.contains("second_value"))
            config.adversary.second_value = value_from_json(adv.at("second_value"));
        if (adv.contains("lie_kinds"))
            for (const auto& name : adv.at("lie_kinds"))
                config.adversary.lie_kinds.insert(notif_kind_from_name(name.get<std::string>()));
        if (adv.contains("mimic_cut"))
            for (const auto& node : adv.at("mimic_cut"))
                config.adversary.mimic_cut.add(node.get<int>());
    }
    return config;
}

json parse_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config: not valid JSON");
    return j;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

NetworkSpec network_from_json_text(const std::string& text) {
    json j = parse_text(text);
    if (j.contains("network")) return network_from_json(j.at("network"));
    return network_from_json(j);
}

ScenarioConfig scenario_from_json_text(const std::string& text) {
    return scenario_from_json(parse_text(text));
}

std::string scenario_to_json_text(const ScenarioConfig& config) {
    return scenario_to_json(config).dump(2) + "\n";
}

std::string report_to_json_text(const ThroughputReport& report) {
    json j;
    j["scenario"] = scenario_to_json(report.scenario);

    json attempts = json::array();
    for (const auto& rec : report.attempts) {
        json a;
        a["generation"] = rec.generation;
        a["attempt"] = rec.attempt;
        a["mode"] = mode_name(rec.mode);
        a["aborted"] = rec.aborted;
        a["failure_detected"] = rec.failure_detected;
        a["default_decision"] = rec.default_decision;
        a["decisions_digest"] = rec.decisions_digest;
        if (rec.diagnosis) {
            json d;
            d["kind"] = rec.diagnosis->kind == DiagnosisOutcome::Kind::SuspectPair
                            ? "suspect_pair"
                            : "identified_node";
            d["accused"] = rec.diagnosis->accused.members();
            a["diagnosis"] = std::move(d);
        } else {
            a["diagnosis"] = nullptr;
        }
        a["data_packets"] = meter_to_json(rec.data_packets);
        a["control_bits"] = meter_to_json(rec.control_bits);
        a["claim_bits"] = meter_to_json(rec.claim_bits);
        attempts.push_back(std::move(a));
    }
    j["attempts"] = std::move(attempts);

    const ReportTotals& t = report.totals;
    j["totals"] = {{"b_t_bits", t.b_t_bits},
                   {"t_units", t.t_units},
                   {"decided_generations", t.decided_generations},
                   {"aborted_attempts", t.aborted_attempts},
                   {"failures_detected", t.failures_detected},
                   {"data_bits", t.data_bits},
                   {"control_bits", t.control_bits},
                   {"claim_bits", t.claim_bits},
                   {"i_star", t.i_star},
                   {"i_star_bits", t.i_star_bits},
                   {"rate", t.rate},
                   {"ratio", t.ratio},
                   {"overhead_fraction", t.overhead_fraction},
                   {"final_mode", mode_name(t.final_mode)}};

    json traffic = json::array();
    for (const auto& msg : report.traffic) {
        json m;
        m["generation"] = msg.generation;
        m["attempt"] = msg.attempt;
        m["phase"] = msg.phase;
        m["from"] = msg.from;
        m["to"] = msg.to;
        m["kind"] = msg.kind == RoundMessage::Kind::Data      ? "data"
                    : msg.kind == RoundMessage::Kind::Control ? "control"
                                                              : "claim";
        if (msg.kind == RoundMessage::Kind::Data) {
            m["alpha"] = msg.point.alpha.value();
            m["forwarded"] = msg.forwarded;
        }
        m["delivered"] = msg.delivered;
        m["bits"] = msg.bits;
        traffic.push_back(std::move(m));
    }
    j["traffic"] = std::move(traffic);

    return j.dump(2) + "\n";
}

NetworkSpec load_network(const std::string& path) {
    return network_from_json_text(slurp(path));
}

ScenarioConfig load_scenario(const std::string& path) {
    return scenario_from_json_text(slurp(path));
}

} // namespace concap
