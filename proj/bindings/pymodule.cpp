#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "concap/capgraph.hpp"
#include "concap/config.hpp"
#include "concap/errors.hpp"
#include "concap/fuzz.hpp"
#include "concap/gf16.hpp"
#include "concap/netsim.hpp"
#include "concap/rscode.hpp"

namespace py = pybind11;
using namespace concap;

namespace {

using Rows = std::vector<std::vector<int>>;

NetworkSpec net_from(const Rows& cap, int f) {
    return NetworkSpec::make(static_cast<int>(cap.size()), f, cap);
}

DataValue value_from(const Rows& rows, int generation) {
    DataValue d;
    d.generation = generation;
    d.packets.reserve(rows.size());
    for (const auto& row : rows) {
        SymbolVec out;
        out.reserve(row.size());
        for (int s : row) {
            if (s < 0 || s > 0xFFFF) throw ValidationError("symbol out of range");
            out.push_back(Gf16(static_cast<std::uint16_t>(s)));
        }
        d.packets.push_back(std::move(out));
    }
    d.validate_shape();
    return d;
}

Rows rows_from(const DataValue& d) {
    Rows out;
    out.reserve(d.packets.size());
    for (const auto& row : d.packets) {
        std::vector<int> v;
        v.reserve(row.size());
        for (Gf16 s : row) v.push_back(s.value());
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<CodedPacket> packets_from(const std::vector<int>& alphas,
                                      const Rows& payloads, int generation) {
    if (alphas.size() != payloads.size())
        throw ValidationError("alphas and payloads differ in length");
    std::vector<CodedPacket> out(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] < 1 || alphas[i] > 0xFFFF)
            throw ValidationError("alpha out of range");
        out[i].generation = generation;
        out[i].point.alpha = Gf16(static_cast<std::uint16_t>(alphas[i]));
        SymbolVec payload;
        payload.reserve(payloads[i].size());
        for (int s : payloads[i]) {
            if (s < 0 || s > 0xFFFF) throw ValidationError("symbol out of range");
            payload.push_back(Gf16(static_cast<std::uint16_t>(s)));
        }
        out[i].payload = std::move(payload);
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_concap, m) {
    m.doc() = "consensus capacity bounds, coding primitives, and the simulator";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<InvariantPanic>(m, "InvariantPanic", PyExc_RuntimeError);

    m.def(
        "capacity_upper_bound",
        [](const Rows& cap, int f) {
            BoundResult res = capacity_upper_bound(net_from(cap, f));
            py::dict out;
            out["i_star"] = res.i_star;
            out["witness_s"] = res.witness_s.members();
            out["witness_gamma"] = res.witness_gamma.members();
            return out;
        },
        py::arg("cap"), py::arg("f") = 1,
        "Packet bound I* of a capacity matrix, with the minimising (s, gamma).");

    m.def(
        "brute_force_bound",
        [](const Rows& cap, int f) { return brute_force_bound(net_from(cap, f)); },
        py::arg("cap"), py::arg("f") = 1);

    m.def(
        "four_node_bound",
        [](const Rows& cap) { return four_node_bound(net_from(cap, 1)); },
        py::arg("cap"));

    m.def(
        "pair_sum",
        [](const Rows& cap, int x, int y) { return pair_sum(net_from(cap, 1), x, y); },
        py::arg("cap"), py::arg("x"), py::arg("y"));

    m.def(
        "count_pairs_above",
        [](const Rows& cap, long long r) {
            return count_pairs_above(net_from(cap, 1), r);
        },
        py::arg("cap"), py::arg("r"));

    m.def(
        "select_check_triple",
        [](const Rows& cap, long long r) {
            auto [x, y, z] = select_check_triple(net_from(cap, 1), r);
            return py::make_tuple(x, y, z);
        },
        py::arg("cap"), py::arg("r"));

    auto sym = [](int a) {
        if (a < 0 || a > 0xFFFF) throw ValidationError("symbol out of range");
        return Gf16(static_cast<std::uint16_t>(a));
    };
    m.def(
        "gf16_add", [sym](int a, int b) { return (sym(a) + sym(b)).value(); },
        py::arg("a"), py::arg("b"));
    m.def(
        "gf16_mul", [sym](int a, int b) { return (sym(a) * sym(b)).value(); },
        py::arg("a"), py::arg("b"));
    m.def(
        "gf16_inv", [sym](int a) { return sym(a).inverse().value(); }, py::arg("a"));
    m.def(
        "gf16_pow", [sym](int a, std::uint32_t e) { return sym(a).pow(e).value(); },
        py::arg("a"), py::arg("e"));

    m.def(
        "encode",
        [](const Rows& data, const std::vector<int>& alphas, int generation) {
            DataValue d = value_from(data, generation);
            std::vector<EvalPoint> points(alphas.size());
            for (std::size_t i = 0; i < alphas.size(); ++i) {
                if (alphas[i] < 1 || alphas[i] > 0xFFFF)
                    throw ValidationError("alpha out of range");
                points[i].alpha = Gf16(static_cast<std::uint16_t>(alphas[i]));
            }
            Rows out;
            for (const auto& pkt : encode(d, points)) {
                std::vector<int> payload;
                for (Gf16 s : pkt.payload) payload.push_back(s.value());
                out.push_back(std::move(payload));
            }
            return out;
        },
        py::arg("data"), py::arg("alphas"), py::arg("generation") = 0,
        "Evaluate the generation polynomial at each alpha; one payload per point.");

    m.def(
        "solve",
        [](const std::vector<int>& alphas, const Rows& payloads, int r, int generation) {
            return rows_from(solve(packets_from(alphas, payloads, generation), r));
        },
        py::arg("alphas"), py::arg("payloads"), py::arg("r"), py::arg("generation") = 0,
        "Interpolate the r-row data block back from coded payloads.");

    m.def(
        "check_consistency",
        [](const std::vector<int>& alphas, const Rows& payloads,
           int r) -> std::optional<Rows> {
            auto res = check_consistency(packets_from(alphas, payloads, 0), r);
            if (!res) return std::nullopt;
            return rows_from(*res);
        },
        py::arg("alphas"), py::arg("payloads"), py::arg("r"),
        "The unique consistent data block, or None when the set disagrees.");

    m.def(
        "simulate",
        [](const std::string& config_json) {
            ScenarioConfig cfg = scenario_from_json_text(config_json);
            cfg.validate();
            auto res = run_execution(cfg);
            return report_to_json_text(res.report);
        },
        py::arg("config_json"),
        "Run one scenario from its JSON text; returns the report as JSON text.");

    m.def(
        "fuzz",
        [](long long trials, std::uint64_t seed) {
            FuzzSummary summary = run_fuzz({.trials = trials, .seed = seed});
            py::dict out;
            out["trials_run"] = summary.trials_run;
            if (summary.violation) {
                py::dict v;
                v["trial"] = summary.violation->trial;
                v["reason"] = summary.violation->reason;
                v["config"] = summary.violation->config_json;
                out["violation"] = v;
            } else {
                out["violation"] = py::none();
            }
            return out;
        },
        py::arg("trials"), py::arg("seed") = 0,
        "Randomised scenario sweep; reports the first invariant violation if any.");
}
