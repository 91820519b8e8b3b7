#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "concap/gf16.hpp"
#include "concap/network.hpp"

namespace concap {

// One generation's payload: r packets of l field symbols each. Interpreted
// per symbol position as the coefficients of a degree-<r polynomial.
struct DataValue {
    int generation = 0;
    std::vector<SymbolVec> packets; // r rows, l columns

    int r() const { return static_cast<int>(packets.size()); }
    int l() const { return packets.empty() ? 0 : static_cast<int>(packets[0].size()); }

    bool operator==(const DataValue&) const = default;

    static DataValue zeros(int r, int l, int generation = 0);
    void validate_shape() const;
};

// Wire position of a fresh coded packet: the index-th slot on link from->to.
struct Slot {
    int from = 0;
    int to = 0;
    int index = 0;

    auto operator<=>(const Slot&) const = default;
};

struct EvalPoint {
    Gf16 alpha;
    Slot slot;

    bool operator==(const EvalPoint&) const = default;
};

struct CodedPacket {
    int generation = 0;
    EvalPoint point;
    SymbolVec payload;

    bool operator==(const CodedPacket&) const = default;
};

// Per-generation assignment of evaluation points to wire slots. Alphas are
// 1 + the slot's linear index over links ordered by (from, to), so they are
// pairwise distinct, non-zero, and reproducible by any party from the
// network spec alone.
class PointRegistry {
public:
    PointRegistry(const NetworkSpec& net, int generation);

    int generation() const { return generation_; }
    const std::vector<EvalPoint>& link_points(int from, int to) const;
    EvalPoint at(const Slot& slot) const;
    long long total_points() const { return total_; }

private:
    int n_;
    int generation_;
    long long total_ = 0;
    std::vector<std::vector<std::vector<EvalPoint>>> points_; // [from][to]
};

// Evaluate `data` at each point: payload[k] = sum_m data.packets[m][k] * alpha^m.
std::vector<CodedPacket> encode(const DataValue& data, const std::vector<EvalPoint>& points);
CodedPacket encode_one(const DataValue& data, const EvalPoint& point);

// Interpolate the unique DataValue of shape (r, l) from >= r packets with
// pairwise distinct alphas. Uses the first r packets in the given order.
DataValue solve(const std::vector<CodedPacket>& packets, int r);

// Interpolate from the first r packets, then check every packet against the
// result. nullopt when the set fits no single degree-<r polynomial family.
std::optional<DataValue> check_consistency(const std::vector<CodedPacket>& packets, int r);

// True when every packet equals the encoding of `own` at its point.
// An empty packet list verifies trivially.
bool verify_against(const std::vector<CodedPacket>& packets, const DataValue& own);

} // namespace concap
