#include <random>

#include "concap/capgraph.hpp"
#include "concap/errors.hpp"
#include "doctest.h"

using namespace concap;

namespace {

NetworkSpec random_net(std::mt19937& rng, int n, int f, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    std::vector<std::vector<int>> cap(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) cap[i][j] = d(rng);
    return NetworkSpec::make(n, f, std::move(cap));
}

} // namespace

TEST_CASE("bound on the asymmetric 4-node example") {
    // Heavier links inside {0,1,2}: 0<->1 and 1<->2 carry 2, the rest 1.
    std::vector<std::vector<int>> cap{
        {0, 2, 1, 1},
        {2, 0, 2, 1},
        {1, 2, 0, 1},
        {1, 1, 1, 0},
    };
    NetworkSpec net = NetworkSpec::make(4, 1, cap);
    BoundResult res = capacity_upper_bound(net);
    CHECK(res.i_star == 2);
    CHECK(res.witness_s == NodeSet{0});
    CHECK(res.witness_gamma == NodeSet{2, 3});
    CHECK(res.terms.size() == 12);
    CHECK(four_node_bound(net) == 2);
}

TEST_CASE("fat incoming links elsewhere do not lift the bound") {
    std::vector<std::vector<int>> cap(4, std::vector<int>(4, 1));
    for (int i = 0; i < 4; ++i) cap[i][i] = 0;
    for (int j = 0; j < 3; ++j) cap[j][3] = 5;
    NetworkSpec net = NetworkSpec::make(4, 1, cap);
    CHECK(four_node_bound(net) == 2);
    CHECK(capacity_upper_bound(net).i_star == 2);
}

TEST_CASE("gamma enumeration") {
    NetworkSpec net = uniform_four_node();
    auto gammas = enumerate_gammas(net, NodeSet{0});
    REQUIRE(gammas.size() == 3);
    CHECK(gammas[0] == NodeSet{1, 2});
    CHECK(gammas[1] == NodeSet{1, 3});
    CHECK(gammas[2] == NodeSet{2, 3});
    CHECK_THROWS_AS(enumerate_gammas(net, NodeSet{}), SizeViolation);
    CHECK_THROWS_AS(enumerate_gammas(net, NodeSet{0, 1}), SizeViolation);
}

TEST_CASE("cut value rejects overlapping sets") {
    NetworkSpec net = uniform_four_node();
    CHECK_THROWS_AS(cut_value(net, NodeSet{0}, NodeSet{0, 1}), OverlapViolation);
    CHECK(cut_value(net, NodeSet{0}, NodeSet{1, 2}) == 2);
}

TEST_CASE("brute-force enumeration agrees with the structured bound") {
    std::mt19937 rng(20240917);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 4 + static_cast<int>(rng() % 3);
        NetworkSpec net = random_net(rng, n, 1, 0, 10);
        CHECK(capacity_upper_bound(net).i_star == brute_force_bound(net));
        if (n == 4) CHECK(four_node_bound(net) == brute_force_bound(net));
    }
    for (int trial = 0; trial < 20; ++trial) {
        NetworkSpec net = random_net(rng, 5, 2, 0, 10);
        CHECK(capacity_upper_bound(net).i_star == brute_force_bound(net));
    }
}

TEST_CASE("pair sums") {
    NetworkSpec net = uniform_four_node();
    CHECK(pair_sum(net, 0, 1) == 2);
    CHECK_THROWS_AS(pair_sum(net, 2, 2), SameNode);
}

TEST_CASE("below the bound most pairs stay heavy") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        NetworkSpec net = random_net(rng, 4, 1, 1, 10);
        long long bound = four_node_bound(net);
        for (long long r = 1; r < bound; ++r)
            CHECK(count_pairs_above(net, r) >= 3);
    }
}

TEST_CASE("lexicographic triple on the uniform network") {
    NetworkSpec net = uniform_four_node();
    auto [x, y, z] = select_check_triple(net, 1);
    CHECK(x == 0);
    CHECK(y == 1);
    CHECK(z == 2);
    CHECK_THROWS_AS(select_check_triple(net, 2), ValidationError);
}

TEST_CASE("triples exist for every admissible rate") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        NetworkSpec net = random_net(rng, 4, 1, 1, 10);
        long long bound = four_node_bound(net);
        for (long long r = 1; r < bound; ++r) {
            auto [x, y, z] = select_check_triple(net, r);
            CHECK(pair_sum(net, x, y) > r);
            CHECK(pair_sum(net, y, z) > r);
            CHECK(x < z);
        }
    }
}

TEST_CASE("malformed networks are rejected") {
    CHECK_THROWS_AS(NetworkSpec::make(1, 1, {{0}}), ShapeViolation);
    CHECK_THROWS_AS(NetworkSpec::make(2, 1, {{0, -1}, {1, 0}}), ShapeViolation);
    CHECK_THROWS_AS(NetworkSpec::make(2, 1, {{1, 1}, {1, 0}}), ShapeViolation);
    NetworkSpec tiny = NetworkSpec::make(3, 1, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    CHECK_THROWS_AS(four_node_bound(tiny), ShapeViolation);
    CHECK_THROWS_AS(count_pairs_above(tiny, 0), ShapeViolation);
}
