#include <doctest.h>

#include <algorithm>

#include "ccabc/network.hpp"
#include "ccabc/rng.hpp"
#include "oracles.hpp"

using namespace ccabc;

TEST_CASE("deploy: Table-1 scale field") {
    const Network net = deploy(150, 150, {50, 175}, 0.5, 2.0);
    CHECK(net.node_count() == 22500);
    double total = 0.0;
    for (const Node& n : net.nodes) {
        CHECK(n.energy == 0.5);
        CHECK(n.mode == NodeMode::standby);
        CHECK(!n.cluster_id);
        total += n.energy;
    }
    CHECK(total == doctest::Approx(11250.0).epsilon(1e-12));
}

TEST_CASE("deploy: single node field") {
    const Network net = deploy(1, 1, {0, 5}, 0.5, 2.0);
    REQUIRE(net.node_count() == 1);
    CHECK(net.nodes[0].pos.x == 0.0);
    CHECK(net.nodes[0].pos.y == 0.0);
}

TEST_CASE("atomic structure: 3x3 patch around the centre node") {
    // bins live in squared distance with width r_od: side nodes (d^2 = 1)
    // stay in the nucleus, corners (d^2 = 2 >= 1.5) land in the first orbit
    Network net = deploy(3, 3, {0, -5}, 0.5, 2.0);
    std::vector<int> members(9);
    for (int i = 0; i < 9; ++i) members[i] = i;
    const Cluster cl = assign_atomic_structure(net, 0, members, {1.0, 1.0}, 1.5);

    // oracle: recompute annulus bins directly
    std::vector<int> expect_nucleus, expect_orbit1;
    for (int i = 0; i < 9; ++i) {
        const double d2 = dist2(net.nodes[i].pos, {1.0, 1.0});
        (static_cast<int>(d2 / 1.5) == 0 ? expect_nucleus : expect_orbit1).push_back(i);
    }
    CHECK(expect_nucleus.size() == 5);  // centre + 4 side nodes
    CHECK(expect_orbit1.size() == 4);   // corners

    std::vector<int> nucleus = cl.nucleus;
    std::sort(nucleus.begin(), nucleus.end());
    CHECK(nucleus == expect_nucleus);

    REQUIRE(cl.orbits.size() == 1);
    std::vector<int> orbit1;
    for (const auto& sector : cl.orbits[0])
        for (int id : sector) orbit1.push_back(id);
    std::sort(orbit1.begin(), orbit1.end());
    CHECK(orbit1 == expect_orbit1);

    for (int id : cl.nucleus) CHECK(net.nodes[id].orbit_index == 0);
    for (int id : orbit1) CHECK(net.nodes[id].orbit_index == 1);
}

TEST_CASE("atomic structure: single member is the nucleus") {
    Network net = deploy(5, 5, {0, -5}, 0.5, 2.0);
    const Cluster cl = assign_atomic_structure(net, 1, {12}, net.nodes[12].pos, 2.0);
    CHECK(cl.nucleus == std::vector<int>{12});
    CHECK(cl.orbits.empty());
}

TEST_CASE("atomic structure: empty member set rejected") {
    Network net = deploy(3, 3, {0, -5}, 0.5, 2.0);
    CHECK_THROWS_AS(assign_atomic_structure(net, 0, {}, {1, 1}, 1.0), std::invalid_argument);
}

TEST_CASE("atomic structure: empty nucleus is repaired with the nearest member") {
    Network net = deploy(7, 1, {0, -5}, 0.5, 2.0);
    // centre far from every member: all bins would start at >= 1
    const Cluster cl = assign_atomic_structure(net, 0, {4, 5, 6}, {0.0, 0.0}, 1.0);
    REQUIRE(cl.nucleus.size() == 1);
    CHECK(cl.nucleus[0] == 4);  // nearest to (0,0)
    std::size_t orbit_nodes = 0;
    for (const auto& orbit : cl.orbits)
        for (const auto& sector : orbit) orbit_nodes += sector.size();
    CHECK(orbit_nodes == 2);
}

TEST_CASE("coverage: no active nodes") {
    Network net = deploy(10, 10, {0, -5}, 0.5, 2.0);
    CHECK(coverage(net) == 0.0);
}

TEST_CASE("coverage: all nodes active with radius >= 1 covers everything") {
    Network net = deploy(12, 9, {0, -5}, 0.5, 1.0);
    for (Node& n : net.nodes) n.mode = NodeMode::active;
    CHECK(coverage(net) == 1.0);
}

TEST_CASE("coverage: single active node counts exactly the in-disc samples") {
    Network net = deploy(9, 9, {0, -5}, 0.5, 1.0);
    net.node_at_cell(4, 4).mode = NodeMode::active;

    const int m = kCoverageSamplesPerSide;
    int inside = 0;
    for (int j = 0; j < 9 * m; ++j) {
        for (int i = 0; i < 9 * m; ++i) {
            const double dx = (i + 0.5) / m - 0.5 - 4.0;
            const double dy = (j + 0.5) / m - 0.5 - 4.0;
            if (dx * dx + dy * dy <= 1.0) ++inside;
        }
    }
    CHECK(coverage(net) ==
          doctest::Approx(inside / (81.0 * m * m)).epsilon(1e-12));
}

TEST_CASE("coverage tracks the Monte-Carlo oracle on random scenarios") {
    Rng rng(555);
    for (int rep = 0; rep < 6; ++rep) {
        Network net = deploy(10, 10, {0, -5}, 0.5, 1.5 + rng.next_double() * 1.5);
        const int actives = 20 + static_cast<int>(rng.next_below(60));
        for (int i = 0; i < actives; ++i)
            net.nodes[rng.next_below(net.nodes.size())].mode = NodeMode::active;
        const double raster = coverage(net);
        const double mc = oracle::mc_coverage(net, 1000000, rng.next_u64());
        CHECK(std::abs(raster - mc) <= 0.01);
    }
}

TEST_CASE("coverage: sparse 5-node radius-2 scenario stays within 0.01 of the oracle") {
    Rng rng(777);
    for (int rep = 0; rep < 4; ++rep) {
        Network net = deploy(10, 10, {0, -5}, 0.5, 2.0);
        int placed = 0;
        while (placed < 5) {
            Node& n = net.nodes[rng.next_below(net.nodes.size())];
            if (n.mode == NodeMode::active) continue;
            n.mode = NodeMode::active;
            ++placed;
        }
        const double raster = coverage(net);
        const double mc = oracle::mc_coverage(net, 1000000, rng.next_u64());
        CHECK(std::abs(raster - mc) <= 0.01);
    }
}

TEST_CASE("coverage monotone under activation") {
    Rng rng(808);
    Network net = deploy(10, 10, {0, -5}, 0.5, 2.0);
    for (int i = 0; i < 10; ++i) net.nodes[rng.next_below(100)].mode = NodeMode::active;
    double before = coverage(net);
    for (int rep = 0; rep < 20; ++rep) {
        Node& n = net.nodes[rng.next_below(100)];
        if (n.mode == NodeMode::active) continue;
        n.mode = NodeMode::active;
        const double after = coverage(net);
        CHECK(after >= before);
        before = after;
    }
}
