#include "concap/network.hpp"

#include <algorithm>

#include "concap/errors.hpp"

namespace concap {

void NodeSet::add(int x) {
    auto it = std::lower_bound(members_.begin(), members_.end(), x);
    if (it == members_.end() || *it != x) members_.insert(it, x);
}

bool NodeSet::contains(int x) const {
    return std::binary_search(members_.begin(), members_.end(), x);
}

bool NodeSet::intersects(const NodeSet& o) const {
    for (int x : members_)
        if (o.contains(x)) return true;
    return false;
}

NetworkSpec NetworkSpec::make(int n, int f, std::vector<std::vector<int>> cap) {
    NetworkSpec net{n, f, std::move(cap)};
    net.validate();
    return net;
}

void NetworkSpec::validate() const {
    if (n < 2) throw ShapeViolation("network: need at least 2 nodes");
    if (f < 0) throw ShapeViolation("network: negative fault bound");
    if (static_cast<int>(cap.size()) != n)
        throw ShapeViolation("network: capacity matrix must have n rows");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(cap[i].size()) != n)
            throw ShapeViolation("network: capacity matrix must have n columns");
        for (int j = 0; j < n; ++j) {
            if (i == j && cap[i][j] != 0)
                throw ShapeViolation("network: diagonal capacities must be zero");
            if (cap[i][j] < 0)
                throw ShapeViolation("network: capacities must be non-negative");
        }
    }
}

bool NetworkSpec::complete_four_node() const {
    if (n != 4 || f != 1) return false;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j && cap[i][j] <= 0) return false;
    return true;
}

long long NetworkSpec::total_link_packets() const {
    long long total = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) total += cap[i][j];
    return total;
}

NetworkSpec uniform_four_node(int scale) {
    std::vector<std::vector<int>> cap(4, std::vector<int>(4, scale));
    for (int i = 0; i < 4; ++i) cap[i][i] = 0;
    return NetworkSpec::make(4, 1, std::move(cap));
}

} // namespace concap
