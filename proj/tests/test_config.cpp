#include <algorithm>
#include <string>

#include "concap/config.hpp"
#include "concap/errors.hpp"
#include "concap/netsim.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace concap;

namespace {

const char* kNet = R"({"n": 4, "f": 1, "cap": [[0,2,2,2],[2,0,2,2],[2,2,0,2],[2,2,2,0]]})";

std::string wrap_scenario(const std::string& adversary) {
    return std::string(R"({"network": )") + kNet +
           R"(, "rate": {"packets": 2, "packet_bits": 32}, "generations": 3,
              "seed": 7, "input_pattern": {"kind": "all_equal"}, "adversary": )" +
           adversary + "}";
}

} // namespace

TEST_CASE("network json round trip") {
    NetworkSpec net = network_from_json_text(kNet);
    CHECK(net.n == 4);
    CHECK(net.cap[0][1] == 2);
    // Wrapped form parses to the same network.
    NetworkSpec wrapped = network_from_json_text(std::string(R"({"network": )") + kNet + "}");
    CHECK(wrapped.cap == net.cap);
}

TEST_CASE("malformed network documents are refused") {
    CHECK_THROWS_AS(network_from_json_text("{"), ConfigError);
    CHECK_THROWS_AS(network_from_json_text(R"({"n": 4, "f": 1})"), ConfigError);
    CHECK_THROWS_AS(network_from_json_text(R"({"n": 4, "f": 1, "cap": [[0]]})"), ConfigError);
    CHECK_THROWS_AS(network_from_json_text(R"({"n": 2, "f": 1, "cap": [[0,1],[-1,0]]})"),
                    ValidationError);
}

TEST_CASE("scenario round trips through its serialization") {
    ScenarioConfig cfg = scenario_from_json_text(wrap_scenario(
        R"({"faulty": 2, "behavior": "corrupt_payload", "adversary_seed": 9,
            "corrupt_links": [[2, 0], [2, 3]], "corrupt_positions": [0, 1]})"));
    cfg.validate();
    CHECK(cfg.adversary.behavior == Behavior::CorruptPayload);
    CHECK(cfg.adversary.corrupt_links.size() == 2);

    ScenarioConfig back = scenario_from_json_text(scenario_to_json_text(cfg));
    CHECK(back.net.cap == cfg.net.cap);
    CHECK(back.rate.packets == cfg.rate.packets);
    CHECK(back.rate.packet_bits == cfg.rate.packet_bits);
    CHECK(back.generations == cfg.generations);
    CHECK(back.seed == cfg.seed);
    CHECK(back.pattern.kind == cfg.pattern.kind);
    CHECK(back.adversary.faulty == cfg.adversary.faulty);
    CHECK(back.adversary.behavior == cfg.adversary.behavior);
    CHECK(back.adversary.corrupt_links == cfg.adversary.corrupt_links);
    CHECK(back.adversary.corrupt_positions == cfg.adversary.corrupt_positions);
    CHECK(back.adversary.adversary_seed == cfg.adversary.adversary_seed);
}

TEST_CASE("adversary variants keep their extras across the round trip") {
    ScenarioConfig lie = scenario_from_json_text(wrap_scenario(
        R"({"faulty": 1, "behavior": "lie_notifications",
            "lie_kinds": ["final_consistency", "direct_verdict"]})"));
    CHECK(lie.adversary.lie_kinds ==
          std::set<NotifKind>{NotifKind::DirectVerdict, NotifKind::FinalConsistency});
    ScenarioConfig lie2 = scenario_from_json_text(scenario_to_json_text(lie));
    CHECK(lie2.adversary.lie_kinds == lie.adversary.lie_kinds);

    ScenarioConfig mimic = scenario_from_json_text(wrap_scenario(
        R"({"faulty": 0, "behavior": "partition_mimic", "mimic_cut": [2, 3]})"));
    CHECK(mimic.adversary.mimic_cut == NodeSet{2, 3});
    CHECK(scenario_from_json_text(scenario_to_json_text(mimic)).adversary.mimic_cut ==
          mimic.adversary.mimic_cut);

    ScenarioConfig equiv = scenario_from_json_text(wrap_scenario(
        R"({"faulty": 3, "behavior": "equivocate_input",
            "second_value": [[7, 8], [9, 10]]})"));
    REQUIRE(equiv.adversary.second_value.has_value());
    CHECK(equiv.adversary.second_value->packets[1][1] == Gf16(10));
    ScenarioConfig equiv2 = scenario_from_json_text(scenario_to_json_text(equiv));
    CHECK(equiv2.adversary.second_value == equiv.adversary.second_value);
}

TEST_CASE("explicit input patterns carry per-generation values") {
    std::string text = std::string(R"({"network": )") + kNet +
                       R"(, "rate": {"packets": 2, "packet_bits": 32}, "generations": 1,
                          "seed": 0,
                          "input_pattern": {"kind": "explicit", "values":
                            [[[[1,1],[1,1]], [[1,1],[1,1]], [[1,1],[1,1]], [[2,2],[2,2]]]]},
                          "adversary": {"faulty": -1, "behavior": "none"}})";
    ScenarioConfig cfg = scenario_from_json_text(text);
    cfg.validate();
    REQUIRE(cfg.pattern.values.size() == 1);
    CHECK(cfg.pattern.values[0][3].packets[0][0] == Gf16(2));
    ScenarioConfig back = scenario_from_json_text(scenario_to_json_text(cfg));
    CHECK(back.pattern.values == cfg.pattern.values);
}

TEST_CASE("scenario validation catches inadmissible rates") {
    std::string text = std::string(R"({"network": )") + kNet +
                       R"(, "rate": {"packets": 4, "packet_bits": 32}, "generations": 1,
                          "seed": 0, "input_pattern": {"kind": "all_equal"},
                          "adversary": {"faulty": -1, "behavior": "none"}})";
    // Parsing succeeds; the rate R = I* is refused at validation time.
    ScenarioConfig cfg = scenario_from_json_text(text);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("reports serialize deterministically with stable fields") {
    ScenarioConfig cfg =
        scenario_from_json_text(wrap_scenario(R"({"faulty": 1, "behavior": "crash"})"));
    ExecutionOptions opts;
    opts.trace_traffic = true;
    std::string one = report_to_json_text(run_execution(cfg, opts).report);
    std::string two = report_to_json_text(run_execution(cfg, opts).report);
    CHECK(one == two);

    auto j = nlohmann::json::parse(one);
    CHECK(j.contains("scenario"));
    CHECK(j.contains("attempts"));
    CHECK(j.contains("totals"));
    CHECK(j.contains("traffic"));
    CHECK(j["totals"]["decided_generations"].get<long long>() == 3);
    CHECK(j["totals"]["i_star"].get<long long>() == 4);
    bool saw_diagnosis = false;
    for (const auto& a : j["attempts"])
        if (!a["diagnosis"].is_null()) {
            saw_diagnosis = true;
            CHECK(a["diagnosis"]["kind"].is_string());
            std::vector<int> accused = a["diagnosis"]["accused"].get<std::vector<int>>();
            CHECK(std::find(accused.begin(), accused.end(), 1) != accused.end());
        }
    CHECK(saw_diagnosis);
}
