#pragma once

#include <compare>
#include <initializer_list>
#include <vector>

namespace concap {

// Sorted, duplicate-free set of node indices. Comparison is lexicographic on
// the member list, which is what every tie-break in this library keys on.
class NodeSet {
public:
    NodeSet() = default;
    NodeSet(std::initializer_list<int> xs) {
        for (int x : xs) add(x);
    }

    void add(int x);
    bool contains(int x) const;
    bool intersects(const NodeSet& o) const;

    int size() const { return static_cast<int>(members_.size()); }
    bool empty() const { return members_.empty(); }
    const std::vector<int>& members() const { return members_; }

    auto operator<=>(const NodeSet&) const = default;

private:
    std::vector<int> members_;
};

// Directed network with integer per-link packet capacities. cap[i][j] is the
// number of coded packets link i->j carries per time unit; diagonal is zero.
struct NetworkSpec {
    int n = 0;
    int f = 0;
    std::vector<std::vector<int>> cap;

    static NetworkSpec make(int n, int f, std::vector<std::vector<int>> cap);

    // Throws ValidationError subtypes on malformed instances.
    void validate() const;

    // n == 4, f == 1, every off-diagonal capacity strictly positive: the
    // shape the protocol runner accepts.
    bool complete_four_node() const;

    // Sum of all link capacities (registry slot count per generation).
    long long total_link_packets() const;
};

// Complete 4-node network with every link capacity equal to `scale`.
NetworkSpec uniform_four_node(int scale = 1);

} // namespace concap
