#pragma once

#include <vector>

#include "ccabc/aggregation.hpp"
#include "ccabc/network.hpp"

namespace ccabc {

// First-order radio constants (Table-1 style defaults live in the config).
struct EnergyParams {
    double epsilon = 50e-9;          // J/bit, transmitter/receiver circuit
    double gamma = 10e-12;           // J/bit/m^n, amplifier
    double omega = 5e-9;             // J/bit, aggregation
    double n = 2.0;                  // path-loss exponent
    double standby_per_round = 6e-5; // J
    double initial = 0.5;            // J
    double dead_threshold = 0.0;     // J; node is dead below this
};

double tx_energy(double bits, double distance, const EnergyParams& p);
double rx_energy(double bits, const EnergyParams& p);

// One cluster-head term of the inter-cluster cost: bits * ((eps+omega) + gamma*d^n).
double ch_transmit_cost(double bits, double distance, const EnergyParams& p);

struct CostReport {
    double inter = 0.0;  // f(empty), J
    double intra = 0.0;  // f(I), J
    std::vector<std::pair<int, double>> per_cluster_intra;
    std::vector<std::pair<int, double>> per_cluster_inter;
};

// Discrete form of the inter-cluster cost over the given CH routes: for each
// cluster head, bits_per_ch * ((eps+omega) + gamma * d^n) with d the head's
// next-hop distance (routes[i] lists CH node ids starting at cluster i's
// head; a single-entry route transmits straight to the base station).
double inter_cluster_cost(const Network& network, const std::vector<Cluster>& clusters,
                          const std::vector<std::vector<int>>& routes, double bits_per_ch,
                          const EnergyParams& p);

// Discrete form of the intra-cluster cost: sum over transmitting edges of
// the atomic structure (member -> sub-orbit collector, sub-orbit -> orbit
// collector, orbit chain -> nucleus) of alpha_i * (eps + gamma * d^n), with
// alpha_i the bits carried after per-hop aggregation.
double intra_cluster_cost(const Cluster& cluster, const Network& network, double bits_per_member,
                          const EnergyParams& p, const AggregationParams& agg);

// Algorithm-2 orbital spacing: D = neighbours(r_max) / (pi r_max^2),
// r_min = 1/sqrt(D), r_od = geometric mean of r_max and r_min clamped to
// [r_min, r_max]. No neighbours (or r_min beyond r_max) falls back to r_max.
double orbital_distance(double r_max, const Network& network, Vec2 center);

// ---- cluster data flow ----------------------------------------------------
// Enumerates one round of intra-cluster traffic: members push their readings
// to the sub-orbit collector, sub-orbit collectors feed the orbit collector,
// and orbit payloads cascade inward orbit by orbit until the innermost one
// hands the aggregate to the cluster head. Shared by the cost functionals
// (every alive member, one message) and the round loop (active members,
// transmissions_per_round messages).

enum class FlowFilter { all_alive, active_only };

struct FlowHop {
    int from = -1;
    int to = -1;        // node id; the CH->BS leg is not part of the flow
    double bits = 0.0;  // real-valued; round up only when charging the radio
    double distance = 0.0;
    int count = 1;      // identical messages on this edge
};

struct FlowAggregation {
    int node = -1;
    double energy_j = 0.0;
};

struct ClusterFlow {
    std::vector<FlowHop> hops;
    std::vector<FlowAggregation> aggregations;
    double head_payload_bits = 0.0;  // 0 when nothing flowed
    int head = -1;
};

ClusterFlow build_cluster_flow(const Network& network, const Cluster& cluster, int head,
                               FlowFilter filter, int messages_per_member,
                               const AggregationParams& agg, const EnergyParams& energy);

}  // namespace ccabc
