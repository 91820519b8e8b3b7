#pragma once

#include <tuple>
#include <vector>

#include "concap/network.hpp"

namespace concap {

// One min-cut style term: the packets the links gamma -> s can carry.
struct CutTerm {
    NodeSet s;
    NodeSet gamma;
    long long value = 0;

    auto operator<=>(const CutTerm&) const = default;
};

struct BoundResult {
    long long i_star = 0;
    NodeSet witness_s;
    NodeSet witness_gamma;
    std::vector<CutTerm> terms;
};

// All candidate relay sets for a decision set `s`: subsets of V \ s of size
// n - |s| - f, in lexicographic order.
std::vector<NodeSet> enumerate_gammas(const NetworkSpec& net, const NodeSet& s);

// Sum of cap[j][i] over j in gamma, i in s.
long long cut_value(const NetworkSpec& net, const NodeSet& s, const NodeSet& gamma);

// I* = min over non-empty s with |s| <= f, gamma in Gamma_s of cut_value.
// Ties resolve to the lexicographically smallest (s, gamma) witness.
BoundResult capacity_upper_bound(const NetworkSpec& net);

// Specialised n=4, f=1 form: minimum over the 12 sums of two link capacities
// entering a common node. Equals capacity_upper_bound(net).i_star.
long long four_node_bound(const NetworkSpec& net);

// w-hat(x, y) = cap[x][y] + cap[y][x].
long long pair_sum(const NetworkSpec& net, int x, int y);

// Number of unordered node pairs with pair_sum > r (n = 4 only).
int count_pairs_above(const NetworkSpec& net, long long r);

// Lexicographically smallest (x, y, z), x < z, with pair_sum(x, y) > r and
// pair_sum(y, z) > r. Exists whenever r < four_node_bound(net).
std::tuple<int, int, int> select_check_triple(const NetworkSpec& net, long long r);

// Independent brute-force evaluation of the bound by bitmask enumeration.
// Deliberately shares no code with capacity_upper_bound.
long long brute_force_bound(const NetworkSpec& net);

} // namespace concap
