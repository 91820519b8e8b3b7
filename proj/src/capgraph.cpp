#include "concap/capgraph.hpp"

#include <algorithm>

#include "concap/errors.hpp"

namespace concap {
namespace {

void push_combinations(const std::vector<int>& pool, int k, std::size_t start,
                       std::vector<int>& cur, std::vector<NodeSet>& out) {
    if (static_cast<int>(cur.size()) == k) {
        NodeSet s;
        for (int x : cur) s.add(x);
        out.push_back(s);
        return;
    }
    for (std::size_t i = start; i < pool.size(); ++i) {
        cur.push_back(pool[i]);
        push_combinations(pool, k, i + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<NodeSet> subsets_of_size(const NetworkSpec& net, int k) {
    std::vector<int> pool(net.n);
    for (int i = 0; i < net.n; ++i) pool[i] = i;
    std::vector<NodeSet> out;
    std::vector<int> cur;
    push_combinations(pool, k, 0, cur, out);
    return out;
}

} // namespace

std::vector<NodeSet> enumerate_gammas(const NetworkSpec& net, const NodeSet& s) {
    net.validate();
    if (s.empty() || s.size() > net.f)
        throw SizeViolation("enumerate_gammas: need 0 < |s| <= f");
    for (int x : s.members())
        if (x < 0 || x >= net.n)
            throw ShapeViolation("enumerate_gammas: node out of range");
    int k = net.n - s.size() - net.f;
    if (k < 1)
        throw SizeViolation("enumerate_gammas: no room for a relay set");
    std::vector<int> pool;
    for (int i = 0; i < net.n; ++i)
        if (!s.contains(i)) pool.push_back(i);
    std::vector<NodeSet> out;
    std::vector<int> cur;
    push_combinations(pool, k, 0, cur, out);
    return out;
}

long long cut_value(const NetworkSpec& net, const NodeSet& s, const NodeSet& gamma) {
    if (s.intersects(gamma))
        throw OverlapViolation("cut_value: s and gamma overlap");
    long long total = 0;
    for (int j : gamma.members())
        for (int i : s.members()) total += net.cap[j][i];
    return total;
}

BoundResult capacity_upper_bound(const NetworkSpec& net) {
    net.validate();
    if (net.f < 1 || net.n - 1 - net.f < 1)
        throw SizeViolation("capacity_upper_bound: need f >= 1 and n >= f + 2");
    BoundResult res;
    bool first = true;
    for (int size = 1; size <= net.f; ++size) {
        if (net.n - size - net.f < 1) continue;
        for (const NodeSet& s : subsets_of_size(net, size)) {
            for (const NodeSet& gamma : enumerate_gammas(net, s)) {
                long long v = cut_value(net, s, gamma);
                res.terms.push_back({s, gamma, v});
                if (first || v < res.i_star) {
                    first = false;
                    res.i_star = v;
                    res.witness_s = s;
                    res.witness_gamma = gamma;
                }
            }
        }
    }
    return res;
}

long long four_node_bound(const NetworkSpec& net) {
    net.validate();
    if (net.n != 4 || net.f != 1)
        throw ShapeViolation("four_node_bound: defined for n=4, f=1");
    bool first = true;
    long long best = 0;
    for (int i = 0; i < 4; ++i) {
        for (int j1 = 0; j1 < 4; ++j1) {
            if (j1 == i) continue;
            for (int j2 = j1 + 1; j2 < 4; ++j2) {
                if (j2 == i) continue;
                long long v = static_cast<long long>(net.cap[j1][i]) + net.cap[j2][i];
                if (first || v < best) {
                    first = false;
                    best = v;
                }
            }
        }
    }
    return best;
}

long long pair_sum(const NetworkSpec& net, int x, int y) {
    if (x == y) throw SameNode("pair_sum: x == y");
    if (x < 0 || y < 0 || x >= net.n || y >= net.n)
        throw ShapeViolation("pair_sum: node out of range");
    return static_cast<long long>(net.cap[x][y]) + net.cap[y][x];
}

int count_pairs_above(const NetworkSpec& net, long long r) {
    if (net.n != 4) throw ShapeViolation("count_pairs_above: defined for n=4");
    int count = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (pair_sum(net, i, j) > r) ++count;
    return count;
}

std::tuple<int, int, int> select_check_triple(const NetworkSpec& net, long long r) {
    if (net.n != 4 || net.f != 1)
        throw ShapeViolation("select_check_triple: defined for n=4, f=1");
    if (r >= four_node_bound(net))
        throw ValidationError("select_check_triple: rate must stay below the bound");
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
            if (y == x) continue;
            for (int z = x + 1; z < 4; ++z) {
                if (z == x || z == y) continue;
                if (pair_sum(net, x, y) > r && pair_sum(net, y, z) > r)
                    return {x, y, z};
            }
        }
    throw NoTriple("select_check_triple: no qualifying triple");
}

long long brute_force_bound(const NetworkSpec& net) {
    net.validate();
    if (net.f < 1 || net.n - 1 - net.f < 1)
        throw SizeViolation("brute_force_bound: need f >= 1 and n >= f + 2");
    const int n = net.n;
    long long best = -1;
    for (unsigned smask = 1; smask < (1u << n); ++smask) {
        int ssize = __builtin_popcount(smask);
        if (ssize > net.f) continue;
        int want = n - ssize - net.f;
        if (want < 1) continue;
        for (unsigned gmask = 1; gmask < (1u << n); ++gmask) {
            if (gmask & smask) continue;
            if (__builtin_popcount(gmask) != want) continue;
            long long v = 0;
            for (int j = 0; j < n; ++j) {
                if (!(gmask & (1u << j))) continue;
                for (int i = 0; i < n; ++i)
                    if (smask & (1u << i)) v += net.cap[j][i];
            }
            if (best < 0 || v < best) best = v;
        }
    }
    return best;
}

} // namespace concap
