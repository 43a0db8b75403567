#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "ccabc/clustering.hpp"
#include "ccabc/rng.hpp"
#include "oracles.hpp"

using namespace ccabc;

namespace {

Network test_net(int w, int h) {
    return deploy(w, h, {w / 3.0, h * 7.0 / 6.0}, 0.5, 2.0);
}

FormationOptions default_opts() {
    FormationOptions opts;
    opts.k = 15;
    opts.rules = {1, Neighbourhood::moore9};
    opts.r_max = 5.0;
    opts.rotation_period = 20;
    return opts;
}

double min_pairwise(const std::vector<Vec2>& pts) {
    double best = 1e18;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, dist(pts[i], pts[j]));
    return best;
}

}  // namespace

TEST_CASE("select_seed_positions basics") {
    const Network net = test_net(12, 12);
    CHECK_THROWS_AS(select_seed_positions(net, 0, 1), std::invalid_argument);

    const auto one = select_seed_positions(net, 1, 7);
    CHECK(one.size() == 1);
    const auto again = select_seed_positions(net, 1, 7);
    CHECK(one[0].x == again[0].x);
    CHECK(one[0].y == again[0].y);
}

TEST_CASE("select_seed_positions on a line picks the far end second") {
    const Network net = test_net(20, 1);
    const auto seeds = select_seed_positions(net, 2, 3);
    REQUIRE(seeds.size() == 2);
    const double expect = std::max(seeds[0].x, 19.0 - seeds[0].x);
    CHECK(std::abs(seeds[1].x - seeds[0].x) == expect);
}

TEST_CASE("select_seed_positions spreads 20 seeds over a 150x150 field") {
    const Network net = test_net(150, 150);
    const auto seeds = select_seed_positions(net, 20, 42);
    REQUIRE(seeds.size() == 20);
    CHECK(min_pairwise(seeds) >= 150.0 / std::sqrt(2.0 * 20.0));
}

TEST_CASE("geometric_median of a symmetric square is its centre") {
    const std::vector<Vec2> square{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
    const Vec2 m = geometric_median(square);
    CHECK(m.x == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m.y == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("select_cluster_head: singleton and symmetric cases") {
    Network net = test_net(3, 3);
    for (Node& n : net.nodes) n.mode = NodeMode::active;

    Cluster solo = assign_atomic_structure(net, 0, {4}, net.nodes[4].pos, 1.5);
    CHECK(select_cluster_head(solo, net) == 4);

    std::vector<int> all(9);
    for (int i = 0; i < 9; ++i) all[i] = i;
    Cluster patch = assign_atomic_structure(net, 1, all, {1.0, 1.0}, 1.5);
    CHECK(select_cluster_head(patch, net) == 4);  // centre node
}

TEST_CASE("select_cluster_head: 7-node L-shape agrees with the brute-force 1-median") {
    Network net = test_net(8, 8);
    for (Node& n : net.nodes) n.mode = NodeMode::active;
    // equal arms of three from a shared corner
    const std::vector<int> members{0, 1, 2, 3, 8, 16, 24};
    Cluster cl = build_cluster_structure(net, 0, members, net.nodes[0].pos, 1e6);
    cl.head = -1;
    const int head = select_cluster_head(cl, net);
    CHECK(head == oracle::brute_median_node(net, members));
    CHECK(head == 1);  // one step up the horizontal arm, by tie-break
}

TEST_CASE("select_cluster_head sits nearest the plane minimizer of summed distances") {
    // independent oracle: locate the geometric median by plain grid search
    Rng rng(2718);
    for (int rep = 0; rep < 10; ++rep) {
        Network net = test_net(8, 8);
        for (Node& n : net.nodes) n.mode = NodeMode::active;
        std::set<int> chosen;
        while (chosen.size() < 5 + rng.next_below(4))
            chosen.insert(static_cast<int>(rng.next_below(64)));
        const std::vector<int> members(chosen.begin(), chosen.end());

        auto sum_dist = [&](Vec2 p) {
            double s = 0.0;
            for (int id : members) s += dist(p, net.nodes[id].pos);
            return s;
        };
        Vec2 gm{0, 0};
        double best = 1e18;
        for (double y = -1.0; y <= 8.0; y += 0.02) {
            for (double x = -1.0; x <= 8.0; x += 0.02) {
                const double s = sum_dist({x, y});
                if (s < best) {
                    best = s;
                    gm = {x, y};
                }
            }
        }

        Cluster cl = build_cluster_structure(net, 0, members, net.nodes[members[0]].pos, 1e6);
        cl.head = -1;
        const int head = select_cluster_head(cl, net);
        double nearest = 1e18;
        for (int id : members) nearest = std::min(nearest, dist(net.nodes[id].pos, gm));
        CHECK(dist(net.nodes[head].pos, gm) <= nearest + 0.05);
    }
}

TEST_CASE("select_cluster_head promotes an active member when the nucleus sleeps") {
    Network net = test_net(5, 5);
    std::vector<int> members;
    for (int i = 0; i < 25; ++i) members.push_back(i);
    Cluster cl = assign_atomic_structure(net, 0, members, {2.0, 2.0}, 1.5);

    for (Node& n : net.nodes) n.mode = NodeMode::standby;
    net.nodes[0].mode = NodeMode::active;  // corner, not a nucleon
    net.nodes[0].energy = 0.4;
    net.nodes[24].mode = NodeMode::active;
    net.nodes[24].energy = 0.45;  // highest-energy active member wins

    const int head = select_cluster_head(cl, net);
    CHECK(head == 24);
    CHECK(std::find(cl.nucleus.begin(), cl.nucleus.end(), 24) != cl.nucleus.end());
    CHECK(net.nodes[24].orbit_index == 0);

    for (Node& n : net.nodes) n.mode = NodeMode::dead;
    Cluster cl2 = cl;
    CHECK(select_cluster_head(cl2, net) == -1);
}

TEST_CASE("generate_clusters: single seed claims a 5x5 network") {
    Network net = test_net(5, 5);
    const EnergyParams energy;
    const AggregationParams agg;
    const auto seeds = select_seed_positions(net, 1, 11);
    const FormationResult formed = generate_clusters(net, default_opts(), energy, agg, seeds);
    REQUIRE(formed.set.clusters.size() == 1);
    CHECK(formed.set.clusters[0].members.size() == 25);
    CHECK(formed.set.clusters[0].head >= 0);
    for (const Node& n : net.nodes) CHECK(n.cluster_id == 0);
}

TEST_CASE("generate_clusters: cost series crosses once and stops there") {
    const EnergyParams energy;
    const AggregationParams agg;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        Network net = test_net(30, 30);
        const auto seeds = select_seed_positions(net, 1, seed);
        const FormationResult formed = generate_clusters(net, default_opts(), energy, agg, seeds);
        REQUIRE(formed.crossover_found);
        REQUIRE(!formed.log.empty());

        // strictly below until the terminal sample, which crosses
        for (std::size_t i = 0; i + 1 < formed.log.size(); ++i)
            CHECK(formed.log[i].intra < formed.log[i].inter);
        CHECK(formed.log.back().intra >= formed.log.back().inter);
        CHECK(formed.set.formation_generation == formed.log.back().step);
    }
}

TEST_CASE("generate_clusters: symmetric seeds split the field evenly") {
    Network net = test_net(20, 11);
    const EnergyParams energy;
    const AggregationParams agg;
    const std::vector<Vec2> seeds{{4.0, 5.0}, {15.0, 5.0}};
    const FormationResult formed = generate_clusters(net, default_opts(), energy, agg, seeds);
    REQUIRE(formed.set.clusters.size() == 2);
    CHECK(formed.set.clusters[0].members.size() == formed.set.clusters[1].members.size());
}

TEST_CASE("generate_clusters covers every node exactly once") {
    Network net = test_net(24, 18);
    const EnergyParams energy;
    const AggregationParams agg;
    const auto seeds = select_seed_positions(net, 3, 99);
    const FormationResult formed = generate_clusters(net, default_opts(), energy, agg, seeds);

    std::vector<int> seen(net.nodes.size(), 0);
    for (const Cluster& cl : formed.set.clusters) {
        for (int id : cl.members) ++seen[id];
        std::size_t structured = cl.nucleus.size();
        for (const auto& orbit : cl.orbits)
            for (const auto& sector : orbit) structured += sector.size();
        CHECK(structured == cl.members.size());
        CHECK(cl.head >= 0);
        CHECK(net.nodes[cl.head].mode == NodeMode::active);
        CHECK(net.nodes[cl.head].orbit_index == 0);
    }
    for (int c : seen) CHECK(c == 1);
}

TEST_CASE("generate_clusters phase band yields a mixed active/standby split") {
    Network net = test_net(40, 40);
    const EnergyParams energy;
    const AggregationParams agg;
    const auto seeds = select_seed_positions(net, 2, 5);
    generate_clusters(net, default_opts(), energy, agg, seeds);
    int active = 0;
    for (const Node& n : net.nodes)
        if (n.mode == NodeMode::active) ++active;
    CHECK(active > 0);
    CHECK(active < net.node_count());
}

namespace {

EnergyParams lively_params() {
    EnergyParams p;
    p.dead_threshold = 4.1e-5;  // roughly one packet across the nominal spacing
    return p;
}

struct VerifyFixture {
    Network net = test_net(9, 9);
    ClusterSet set;

    VerifyFixture() {
        std::vector<int> members(81);
        for (int i = 0; i < 81; ++i) members[i] = i;
        set.clusters.push_back(assign_atomic_structure(net, 0, members, {4.0, 4.0}, 2.236));
        for (Node& n : net.nodes) {
            n.mode = n.id % 2 == 0 ? NodeMode::active : NodeMode::standby;
            n.timer = n.mode == NodeMode::active ? 20 : 0;
        }
        Cluster& cl = set.clusters[0];
        cl.head = select_cluster_head(cl, net);
        net.nodes[cl.head].role = NodeRole::cluster_head;
    }
};

}  // namespace

TEST_CASE("verify_and_replace: quiet network just ticks timers") {
    VerifyFixture f;
    std::vector<Event> events;
    verify_and_replace(f.net, f.set, lively_params(), 20, 1, events);
    CHECK(events.empty());
    for (const Node& n : f.net.nodes)
        if (n.mode == NodeMode::active) CHECK(n.timer == 19);
}

TEST_CASE("verify_and_replace: dead head is replaced from the nucleus") {
    VerifyFixture f;
    const int old_head = f.set.clusters[0].head;
    f.net.nodes[old_head].energy = 1e-9;

    std::vector<Event> events;
    verify_and_replace(f.net, f.set, lively_params(), 20, 3, events);

    bool death = false, new_head = false;
    for (const Event& e : events) {
        if (e.kind == "death" && e.node == old_head) death = true;
        if (e.kind == "new_head") {
            new_head = true;
            const Cluster& cl = f.set.clusters[0];
            CHECK(std::find(cl.nucleus.begin(), cl.nucleus.end(), e.node) != cl.nucleus.end());
            CHECK(e.node == cl.head);
        }
    }
    CHECK(death);
    CHECK(new_head);
    CHECK(f.net.nodes[f.set.clusters[0].head].mode == NodeMode::active);
}

TEST_CASE("verify_and_replace: dead active node wakes its best stand-by neighbour") {
    VerifyFixture f;
    const int victim = 2 * 9 + 2;  // active by parity
    REQUIRE(f.net.nodes[victim].mode == NodeMode::active);
    const double cov_before = coverage(f.net);
    f.net.nodes[victim].energy = 1e-9;

    // boost one stand-by neighbour so the choice is unambiguous
    const int lucky = 2 * 9 + 3;
    REQUIRE(f.net.nodes[lucky].mode == NodeMode::standby);
    f.net.nodes[lucky].energy = 0.9;

    std::vector<Event> events;
    verify_and_replace(f.net, f.set, lively_params(), 20, 5, events);

    CHECK(f.net.nodes[victim].mode == NodeMode::dead);
    CHECK(f.net.nodes[lucky].mode == NodeMode::active);
    bool replaced = false;
    for (const Event& e : events)
        if (e.kind == "replace" && e.node == victim && e.other == lucky) replaced = true;
    CHECK(replaced);

    // losing one disc while gaining a neighbouring one costs at most the
    // lost disc's area
    const double disc = std::numbers::pi * 4.0 / (9.0 * 9.0);
    CHECK(coverage(f.net) >= cov_before - disc);
}

TEST_CASE("verify_and_replace: rotation swaps actives for stand-bys in the same group") {
    VerifyFixture f;
    for (Node& n : f.net.nodes)
        if (n.mode == NodeMode::active) n.timer = 1;  // expire this round

    std::vector<Event> events;
    verify_and_replace(f.net, f.set, lively_params(), 20, 7, events);

    int rotations = 0;
    for (const Event& e : events) {
        if (e.kind != "rotate") continue;
        ++rotations;
        CHECK(f.net.nodes[e.node].mode == NodeMode::standby);
        CHECK(f.net.nodes[e.other].mode == NodeMode::active);
        CHECK(f.net.nodes[e.other].timer == 20);
        CHECK(f.net.nodes[e.node].cluster_id == f.net.nodes[e.other].cluster_id);
        CHECK(f.net.nodes[e.node].orbit_index == f.net.nodes[e.other].orbit_index);
    }
    CHECK(rotations > 0);
}

TEST_CASE("rotation liveness: any T-round window hosts at least two head ids") {
    VerifyFixture f;
    const int T = 5;
    for (Node& n : f.net.nodes)
        if (n.mode == NodeMode::active) n.timer = T;

    std::vector<int> head_history;
    for (int round = 1; round <= 4 * T; ++round) {
        std::vector<Event> events;
        verify_and_replace(f.net, f.set, lively_params(), T, round, events);
        head_history.push_back(f.set.clusters[0].head);
    }
    for (std::size_t start = 0; start + T + 1 <= head_history.size(); ++start) {
        std::set<int> window(head_history.begin() + start, head_history.begin() + start + T + 1);
        CHECK(window.size() >= 2);
    }
}
