#include "concap/rscode.hpp"

#include <algorithm>
#include <set>

#include "concap/errors.hpp"

namespace concap {

DataValue DataValue::zeros(int r, int l, int generation) {
    DataValue d;
    d.generation = generation;
    d.packets.assign(r, SymbolVec(l, Gf16(0)));
    return d;
}

void DataValue::validate_shape() const {
    if (packets.empty()) throw ShapeViolation("data value: no packets");
    std::size_t l = packets[0].size();
    if (l == 0) throw ShapeViolation("data value: empty packets");
    for (const auto& p : packets)
        if (p.size() != l) throw ShapeViolation("data value: ragged packets");
}

PointRegistry::PointRegistry(const NetworkSpec& net, int generation)
    : n_(net.n), generation_(generation) {
    net.validate();
    if (net.total_link_packets() >= 65536)
        throw RegistryOverflow("point registry: more slots than field elements");
    points_.assign(n_, std::vector<std::vector<EvalPoint>>(n_));
    long long next = 1;
    for (int from = 0; from < n_; ++from) {
        for (int to = 0; to < n_; ++to) {
            for (int k = 0; k < net.cap[from][to]; ++k) {
                EvalPoint p{Gf16(static_cast<std::uint16_t>(next)), Slot{from, to, k}};
                points_[from][to].push_back(p);
                ++next;
            }
        }
    }
    total_ = next - 1;
}

const std::vector<EvalPoint>& PointRegistry::link_points(int from, int to) const {
    if (from < 0 || to < 0 || from >= n_ || to >= n_)
        throw ShapeViolation("point registry: link out of range");
    return points_[from][to];
}

EvalPoint PointRegistry::at(const Slot& slot) const {
    const auto& pts = link_points(slot.from, slot.to);
    if (slot.index < 0 || slot.index >= static_cast<int>(pts.size()))
        throw ShapeViolation("point registry: slot index out of range");
    return pts[slot.index];
}

CodedPacket encode_one(const DataValue& data, const EvalPoint& point) {
    data.validate_shape();
    const int r = data.r();
    const int l = data.l();
    CodedPacket out;
    out.generation = data.generation;
    out.point = point;
    out.payload.assign(l, Gf16(0));
    // Horner evaluation per symbol position.
    for (int m = r - 1; m >= 0; --m)
        for (int k = 0; k < l; ++k)
            out.payload[k] = out.payload[k] * point.alpha + data.packets[m][k];
    return out;
}

std::vector<CodedPacket> encode(const DataValue& data, const std::vector<EvalPoint>& points) {
    std::set<std::uint16_t> seen;
    for (const auto& p : points)
        if (!seen.insert(p.alpha.value()).second)
            throw DuplicatePoint("encode: repeated evaluation point");
    std::vector<CodedPacket> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(encode_one(data, p));
    return out;
}

DataValue solve(const std::vector<CodedPacket>& packets, int r) {
    if (r < 1) throw ShapeViolation("solve: r must be positive");
    if (static_cast<int>(packets.size()) < r)
        throw InsufficientPackets("solve: fewer packets than unknowns");
    const int l = static_cast<int>(packets[0].payload.size());
    for (const auto& p : packets)
        if (static_cast<int>(p.payload.size()) != l)
            throw ShapeViolation("solve: ragged payloads");
    std::set<std::uint16_t> seen;
    for (int i = 0; i < r; ++i)
        if (!seen.insert(packets[i].point.alpha.value()).second)
            throw DuplicatePoint("solve: repeated evaluation point");

    // Vandermonde system, one shared elimination for all l symbol columns.
    std::vector<std::vector<Gf16>> m(r, std::vector<Gf16>(r + l));
    for (int i = 0; i < r; ++i) {
        Gf16 a = packets[i].point.alpha;
        Gf16 pw(1);
        for (int j = 0; j < r; ++j) {
            m[i][j] = pw;
            pw *= a;
        }
        for (int k = 0; k < l; ++k) m[i][r + k] = packets[i].payload[k];
    }
    for (int col = 0; col < r; ++col) {
        int pivot = -1;
        for (int row = col; row < r; ++row)
            if (!m[row][col].is_zero()) {
                pivot = row;
                break;
            }
        if (pivot < 0) throw InvariantPanic("solve: singular system from distinct points");
        std::swap(m[col], m[pivot]);
        Gf16 inv = m[col][col].inverse();
        for (int j = col; j < r + l; ++j) m[col][j] *= inv;
        for (int row = 0; row < r; ++row) {
            if (row == col || m[row][col].is_zero()) continue;
            Gf16 factor = m[row][col];
            for (int j = col; j < r + l; ++j) m[row][j] += factor * m[col][j];
        }
    }
    DataValue d;
    d.generation = packets[0].generation;
    d.packets.assign(r, SymbolVec(l, Gf16(0)));
    for (int j = 0; j < r; ++j)
        for (int k = 0; k < l; ++k) d.packets[j][k] = m[j][r + k];
    return d;
}

std::optional<DataValue> check_consistency(const std::vector<CodedPacket>& packets, int r) {
    if (static_cast<int>(packets.size()) < r)
        throw InsufficientPackets("check_consistency: fewer packets than unknowns");
    DataValue d = solve(packets, r);
    if (!verify_against(packets, d)) return std::nullopt;
    return d;
}

bool verify_against(const std::vector<CodedPacket>& packets, const DataValue& own) {
    for (const auto& p : packets) {
        CodedPacket expect = encode_one(own, p.point);
        if (expect.payload != p.payload) return false;
    }
    return true;
}

} // namespace concap
