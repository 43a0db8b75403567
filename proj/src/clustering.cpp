#include "ccabc/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ccabc/rng.hpp"

namespace ccabc {

std::vector<Vec2> select_seed_positions(const Network& network, int target_count,
                                        std::uint64_t rng_seed) {
    if (target_count < 1) throw std::invalid_argument("seeds: target_count must be >= 1");

    std::vector<int> eligible;
    for (const Node& n : network.nodes)
        if (n.mode != NodeMode::dead) eligible.push_back(n.id);
    if (target_count > static_cast<int>(eligible.size()))
        throw std::invalid_argument("seeds: target_count exceeds node count");

    Rng rng(rng_seed);
    std::vector<Vec2> seeds;
    std::vector<double> min_d2(eligible.size(), std::numeric_limits<double>::infinity());

    int pick = eligible[rng.next_below(eligible.size())];
    seeds.push_back(network.nodes[pick].pos);

    while (static_cast<int>(seeds.size()) < target_count) {
        int best = -1;
        double best_d2 = -1.0;
        for (std::size_t i = 0; i < eligible.size(); ++i) {
            const double d2 = dist2(network.nodes[eligible[i]].pos, seeds.back());
            if (d2 < min_d2[i]) min_d2[i] = d2;
            if (min_d2[i] > best_d2) {
                best_d2 = min_d2[i];
                best = eligible[i];
            }
        }
        if (best_d2 <= 0.0) throw std::invalid_argument("seeds: fewer distinct positions than seeds");
        seeds.push_back(network.nodes[best].pos);
    }
    return seeds;
}

Vec2 geometric_median(std::span<const Vec2> points, int max_iters, double tol) {
    if (points.empty()) throw std::invalid_argument("geometric_median: no points");

    Vec2 x{0.0, 0.0};
    for (const Vec2& p : points) {
        x.x += p.x;
        x.y += p.y;
    }
    x.x /= static_cast<double>(points.size());
    x.y /= static_cast<double>(points.size());

    constexpr double kTiny = 1e-12;
    for (int iter = 0; iter < max_iters; ++iter) {
        double wx = 0.0, wy = 0.0, wsum = 0.0;
        for (const Vec2& p : points) {
            const double d = std::max(dist(x, p), kTiny);
            const double w = 1.0 / d;
            wx += w * p.x;
            wy += w * p.y;
            wsum += w;
        }
        const Vec2 next{wx / wsum, wy / wsum};
        const double moved = dist(x, next);
        x = next;
        if (moved <= tol) break;
    }
    return x;
}

namespace {

void erase_from_orbit(Cluster& cluster, int node_id, int orbit_index) {
    if (orbit_index < 1 || orbit_index > static_cast<int>(cluster.orbits.size())) return;
    for (auto& sector : cluster.orbits[orbit_index - 1]) {
        auto it = std::find(sector.begin(), sector.end(), node_id);
        if (it != sector.end()) {
            sector.erase(it);
            return;
        }
    }
}

}  // namespace

int select_cluster_head(Cluster& cluster, Network& network) {
    if (cluster.members.empty()) throw std::invalid_argument("select_cluster_head: empty cluster");

    std::vector<Vec2> pts;
    pts.reserve(cluster.members.size());
    for (int id : cluster.members) pts.push_back(network.nodes[id].pos);
    const Vec2 median = geometric_median(pts);

    int best = -1;
    double best_d2 = 0.0;
    for (int id : cluster.nucleus) {
        if (network.nodes[id].mode != NodeMode::active) continue;
        const double d2 = dist2(network.nodes[id].pos, median);
        if (best < 0 || d2 < best_d2 || (d2 == best_d2 && id < best)) {
            best = id;
            best_d2 = d2;
        }
    }
    if (best >= 0) return best;

    // no active nucleon: promote the highest-energy active member nearest
    // the median into the nucleus
    double best_energy = -1.0;
    for (int id : cluster.members) {
        const Node& n = network.nodes[id];
        if (n.mode != NodeMode::active) continue;
        const double d2 = dist2(n.pos, median);
        if (best < 0 || n.energy > best_energy ||
            (n.energy == best_energy && (d2 < best_d2 || (d2 == best_d2 && id < best)))) {
            best = id;
            best_energy = n.energy;
            best_d2 = d2;
        }
    }
    if (best < 0) return -1;  // cluster has no active member

    Node& n = network.nodes[best];
    erase_from_orbit(cluster, best, n.orbit_index.value_or(0));
    cluster.nucleus.push_back(best);
    n.orbit_index = 0;
    n.role = NodeRole::nucleon;
    return best;
}

namespace {

struct ProvisionalEval {
    double inter = 0.0;
    double intra = 0.0;
    int assigned = 0;
};

// f(empty) + f(I) over the provisional clustering at one CA step. Seed
// clusters carry their aggregated payload to the BS (Eq. 3's beta depends
// on cluster size); unreached nodes count as singleton heads.
ProvisionalEval evaluate_provisional(const Network& network, const std::vector<std::vector<int>>& members,
                                     const std::vector<Vec2>& seeds, const std::vector<double>& r_od,
                                     const std::vector<char>& reached, const EnergyParams& energy,
                                     const AggregationParams& agg) {
    ProvisionalEval ev;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        if (members[s].empty()) continue;
        ev.assigned += static_cast<int>(members[s].size());
        const Cluster cl =
            build_cluster_structure(network, static_cast<int>(s), members[s], seeds[s], r_od[s]);
        int head = -1;
        double head_d2 = 0.0;
        for (int id : cl.nucleus) {
            const double d2 = dist2(network.nodes[id].pos, cl.center);
            if (head < 0 || d2 < head_d2 || (d2 == head_d2 && id < head)) {
                head = id;
                head_d2 = d2;
            }
        }
        const ClusterFlow flow =
            build_cluster_flow(network, cl, head, FlowFilter::all_alive, 1, agg, energy);
        for (const FlowHop& h : flow.hops)
            ev.intra += h.count * h.bits * (energy.epsilon + energy.gamma * std::pow(h.distance, energy.n));
        ev.inter += ch_transmit_cost(flow.head_payload_bits,
                                     dist(network.nodes[head].pos, network.bs_pos), energy);
    }
    for (const Node& n : network.nodes) {
        if (n.mode == NodeMode::dead || reached[n.id]) continue;
        ev.inter += ch_transmit_cost(agg.b0, dist(n.pos, network.bs_pos), energy);
    }
    return ev;
}

}  // namespace

FormationResult generate_clusters(Network& network, const FormationOptions& opts,
                                  const EnergyParams& energy, const AggregationParams& agg,
                                  const std::vector<Vec2>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("generate_clusters: no seeds");

    const int w = network.width;
    const int h = network.height;
    const int max_steps = opts.max_steps > 0 ? opts.max_steps : 4 * opts.k;

    SeedSpec spec;
    spec.mode = SeedMode::seeded_nuclei;
    spec.rng_seed = opts.rng_seed;
    std::vector<std::pair<int, int>> seed_cells;
    for (const Vec2& s : seeds) {
        seed_cells.emplace_back(static_cast<int>(std::lround(s.x)), static_cast<int>(std::lround(s.y)));
        spec.positions.push_back(seed_cells.back());
    }
    Grid grid = new_grid(w, h, opts.k, spec);

    // orbital spacing per seed; the deployment is static during formation
    std::vector<double> r_od(seeds.size());
    for (std::size_t s = 0; s < seeds.size(); ++s)
        r_od[s] = orbital_distance(opts.r_max, network, seeds[s]);

    FormationResult result;
    std::vector<std::vector<int>> members(seeds.size());
    std::vector<char> reached(network.nodes.size(), 0);
    // A front "reaches" a node only if the wave actually excited its cell at
    // some point. The BFS component extent cannot gate this: the wave sheds
    // a quiescent ring every k steps, so connectivity from the seed
    // saturates near k-1 while the physical front keeps expanding, and
    // merged blobs span nodes the waves never visited. The gate is instead
    // the touched extent per seed, capped at the step count (causality).
    std::vector<char> touched(network.nodes.size(), 0);
    std::vector<int> touched_extent(seeds.size(), 0);
    std::vector<int> fronts(seeds.size(), 0);

    for (int t = 0; t <= max_steps; ++t) {
        for (std::size_t i = 0; i < grid.cells.size(); ++i) {
            if (grid.cells[i] == 0 || touched[i]) continue;
            touched[i] = 1;
            const int cx = static_cast<int>(i) % w;
            const int cy = static_cast<int>(i) / w;
            for (std::size_t s = 0; s < seeds.size(); ++s)
                touched_extent[s] = std::max(
                    touched_extent[s], chebyshev(cx, cy, seed_cells[s].first, seed_cells[s].second));
        }
        for (std::size_t s = 0; s < seeds.size(); ++s) fronts[s] = std::min(t, touched_extent[s]);

        for (auto& m : members) m.clear();
        std::fill(reached.begin(), reached.end(), 0);
        for (const Node& n : network.nodes) {
            if (n.mode == NodeMode::dead || !touched[n.id]) continue;
            const int cx = n.id % w;
            const int cy = n.id / w;
            int best = -1;
            double best_d2 = 0.0;
            for (std::size_t s = 0; s < seeds.size(); ++s) {
                if (chebyshev(cx, cy, seed_cells[s].first, seed_cells[s].second) > fronts[s]) continue;
                const double d2 = dist2(n.pos, seeds[s]);
                if (best < 0 || d2 < best_d2) {
                    best = static_cast<int>(s);
                    best_d2 = d2;
                }
            }
            if (best >= 0) {
                members[best].push_back(n.id);
                reached[n.id] = 1;
            }
        }

        const ProvisionalEval ev =
            evaluate_provisional(network, members, seeds, r_od, reached, energy, agg);
        result.log.push_back({t, ev.inter, ev.intra, ev.assigned});

        if (ev.intra >= ev.inter) {
            result.crossover_found = true;
            break;
        }
        if (t == max_steps) break;
        grid = step(grid, opts.rules);
    }

    // attach unreached nodes to the nearest seed
    for (const Node& n : network.nodes) {
        if (n.mode == NodeMode::dead || reached[n.id]) continue;
        int best = 0;
        double best_d2 = dist2(n.pos, seeds[0]);
        for (std::size_t s = 1; s < seeds.size(); ++s) {
            const double d2 = dist2(n.pos, seeds[s]);
            if (d2 < best_d2) {
                best = static_cast<int>(s);
                best_d2 = d2;
            }
        }
        members[best].push_back(n.id);
    }

    // finalize: atomic structures, CA-phase active set, heads, timers
    result.set.seed_positions = seeds;
    result.set.formation_generation = grid.generation;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        if (members[s].empty()) continue;
        std::sort(members[s].begin(), members[s].end());
        result.set.clusters.push_back(
            assign_atomic_structure(network, static_cast<int>(s), members[s], seeds[s], r_od[s]));
    }

    for (Node& n : network.nodes) {
        if (n.mode == NodeMode::dead) continue;
        n.mode = grid.cells[n.id] % 2 == 1 ? NodeMode::active : NodeMode::standby;
        n.timer = n.mode == NodeMode::active ? opts.rotation_period : 0;
    }

    for (Cluster& cl : result.set.clusters) {
        int head = select_cluster_head(cl, network);
        if (head < 0) {
            // all-even phase pocket: wake the member nearest the centre
            int wake = -1;
            double wake_d2 = 0.0;
            for (int id : cl.members) {
                const double d2 = dist2(network.nodes[id].pos, cl.center);
                if (wake < 0 || d2 < wake_d2 || (d2 == wake_d2 && id < wake)) {
                    wake = id;
                    wake_d2 = d2;
                }
            }
            Node& n = network.nodes[wake];
            n.mode = NodeMode::active;
            n.timer = opts.rotation_period;
            head = select_cluster_head(cl, network);
        }
        cl.head = head;
        network.nodes[head].role = NodeRole::cluster_head;
    }
    return result;
}

namespace {

struct GroupKey {
    int cluster = -1;
    int orbit = -1;   // 0 = nucleus
    int sector = -1;  // -1 for nucleus
};

GroupKey find_group(const ClusterSet& cs, const Network& network, int node_id) {
    const Node& n = network.nodes[node_id];
    GroupKey key;
    if (!n.cluster_id) return key;
    key.cluster = *n.cluster_id;
    key.orbit = n.orbit_index.value_or(0);
    if (key.orbit == 0) return key;
    for (const Cluster& cl : cs.clusters) {
        if (cl.id != key.cluster) continue;
        if (key.orbit - 1 < static_cast<int>(cl.orbits.size())) {
            const auto& orbit = cl.orbits[key.orbit - 1];
            for (std::size_t sec = 0; sec < orbit.size(); ++sec)
                if (std::find(orbit[sec].begin(), orbit[sec].end(), node_id) != orbit[sec].end()) {
                    key.sector = static_cast<int>(sec);
                    return key;
                }
        }
        break;
    }
    return key;
}

const std::vector<int>* group_members(const ClusterSet& cs, const GroupKey& key) {
    for (const Cluster& cl : cs.clusters) {
        if (cl.id != key.cluster) continue;
        if (key.orbit == 0) return &cl.nucleus;
        if (key.sector >= 0 && key.orbit - 1 < static_cast<int>(cl.orbits.size()))
            return &cl.orbits[key.orbit - 1][key.sector];
        break;
    }
    return nullptr;
}

}  // namespace

void verify_and_replace(Network& network, ClusterSet& clusters, const EnergyParams& params,
                        int rotation_period, int round, std::vector<Event>& events) {
    // 1. death rule
    std::vector<int> new_dead_active;
    for (Node& n : network.nodes) {
        if (n.mode == NodeMode::dead) continue;
        if (n.energy < params.dead_threshold) {
            if (n.mode == NodeMode::active) new_dead_active.push_back(n.id);
            n.mode = NodeMode::dead;
            events.push_back({round, "death", n.id, -1});
        }
    }

    // 2. coverage repair: activate the best stand-by neighbour of each dead
    //    active node
    const double r = network.sensing_radius;
    for (int dead_id : new_dead_active) {
        const Node& dead = network.nodes[dead_id];
        int best = -1;
        double best_energy = -1.0;
        const int x_lo = std::max(0, static_cast<int>(std::ceil(dead.pos.x - r)));
        const int x_hi = std::min(network.width - 1, static_cast<int>(std::floor(dead.pos.x + r)));
        const int y_lo = std::max(0, static_cast<int>(std::ceil(dead.pos.y - r)));
        const int y_hi = std::min(network.height - 1, static_cast<int>(std::floor(dead.pos.y + r)));
        for (int y = y_lo; y <= y_hi; ++y) {
            for (int x = x_lo; x <= x_hi; ++x) {
                const Node& cand = network.node_at_cell(x, y);
                if (cand.mode != NodeMode::standby) continue;
                if (dist2(cand.pos, dead.pos) > r * r) continue;
                if (cand.energy > best_energy || (cand.energy == best_energy && cand.id < best)) {
                    best = cand.id;
                    best_energy = cand.energy;
                }
            }
        }
        if (best >= 0) {
            network.nodes[best].mode = NodeMode::active;
            network.nodes[best].timer = rotation_period;
            events.push_back({round, "replace", dead_id, best});
        } else {
            events.push_back({round, "unreplaced", dead_id, -1});
        }
    }

    // 3. rotation timers; a node rotated out in this pass is not eligible to
    //    rotate straight back in
    std::vector<int> active_now;
    for (const Node& n : network.nodes)
        if (n.mode == NodeMode::active) active_now.push_back(n.id);
    std::vector<char> rested(network.nodes.size(), 0);
    for (int id : active_now) {
        Node& n = network.nodes[id];
        if (n.mode != NodeMode::active) continue;
        if (--n.timer > 0) continue;
        const GroupKey key = find_group(clusters, network, id);
        const std::vector<int>* group = group_members(clusters, key);
        int best = -1;
        double best_energy = -1.0;
        if (group) {
            for (int cand_id : *group) {
                const Node& cand = network.nodes[cand_id];
                if (cand.mode != NodeMode::standby || rested[cand_id]) continue;
                if (cand.energy > best_energy || (cand.energy == best_energy && cand_id < best)) {
                    best = cand_id;
                    best_energy = cand.energy;
                }
            }
        }
        if (best >= 0) {
            n.mode = NodeMode::standby;
            n.timer = 0;
            rested[id] = 1;
            Node& in = network.nodes[best];
            in.mode = NodeMode::active;
            in.timer = rotation_period;
            events.push_back({round, "rotate", id, best});
        } else {
            n.timer = rotation_period;  // nobody to swap with
        }
    }

    // 4. head repair
    for (Cluster& cl : clusters.clusters) {
        const bool valid = cl.head >= 0 && network.nodes[cl.head].mode == NodeMode::active;
        if (valid) continue;
        const int old = cl.head;
        const int head = select_cluster_head(cl, network);
        cl.head = head;
        if (head >= 0) {
            if (old >= 0 && network.nodes[old].role == NodeRole::cluster_head)
                network.nodes[old].role = NodeRole::nucleon;
            network.nodes[head].role = NodeRole::cluster_head;
            events.push_back({round, "new_head", head, cl.id});
        }
    }
}

}  // namespace ccabc
