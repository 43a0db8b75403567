#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccabc/energy.hpp"
#include "ccabc/grid.hpp"
#include "ccabc/network.hpp"

namespace ccabc {

struct ClusterSet {
    std::vector<Cluster> clusters;
    std::vector<Vec2> seed_positions;
    std::int64_t formation_generation = 0;
};

struct Event {
    int round = 0;
    std::string kind;  // death, replace, rotate, new_head, unreplaced, no_crossover
    int node = -1;
    int other = -1;  // counterpart id (activated node, rotated-in node, cluster id)
};

// Farthest-point sampling over non-dead node positions: first seed uniform
// at random, each next maximizing min distance to the chosen set.
std::vector<Vec2> select_seed_positions(const Network& network, int target_count,
                                        std::uint64_t rng_seed);

Vec2 geometric_median(std::span<const Vec2> points, int max_iters = 100, double tol = 1e-6);

// The active nucleon nearest the geometric median of the member positions.
// With no active nucleon, the highest-energy active member nearest the
// median is promoted into the nucleus. Returns -1 when the cluster has no
// active member at all.
int select_cluster_head(Cluster& cluster, Network& network);

struct FormationSample {
    int step = 0;
    double inter = 0.0;  // f(empty)
    double intra = 0.0;  // f(I)
    int assigned = 0;    // nodes reached by some spiral front
};

struct FormationOptions {
    int k = 15;
    RuleParams rules;
    double r_max = 5.0;
    int max_steps = 0;       // 0 -> 4*k
    int rotation_period = 20;
    std::uint64_t rng_seed = 0;  // grid seeding (unused for seeded nuclei)
};

struct FormationResult {
    ClusterSet set;
    std::vector<FormationSample> log;
    bool crossover_found = false;
};

// Algorithm 1: grow spiral fronts from the seeds with the mCCA, after each
// step provisionally assign every reached node to its nearest seed and
// evaluate the two cost functionals; stop at the first step where
// f(I) >= f(empty). Unreached nodes then attach to the nearest seed. The CA
// phase band at the stopping generation (odd cell state) picks the active
// set; heads, roles and rotation timers are installed on the network.
FormationResult generate_clusters(Network& network, const FormationOptions& opts,
                                  const EnergyParams& energy, const AggregationParams& agg,
                                  const std::vector<Vec2>& seeds);

// Algorithm 3: mark nodes below the dead threshold, activate a stand-by
// neighbour for every dead active node, drive rotation timers (expiry swaps
// the active node with the best stand-by in the same orbit position), and
// re-select heads that died or rotated out. Appends one event per change.
void verify_and_replace(Network& network, ClusterSet& clusters, const EnergyParams& params,
                        int rotation_period, int round, std::vector<Event>& events);

}  // namespace ccabc
