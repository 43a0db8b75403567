#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccabc/aggregation.hpp"
#include "ccabc/clustering.hpp"
#include "ccabc/energy.hpp"
#include "ccabc/grid.hpp"
#include "ccabc/leach.hpp"
#include "ccabc/network.hpp"
#include "ccabc/rng.hpp"

namespace ccabc {

enum class Protocol { ccabc, leach };
enum class ChRouting { greedy, direct };

struct SimConfig {
    int width = 150;
    int height = 150;
    Vec2 bs{50.0, 175.0};
    int k = 15;
    RuleParams rules;
    std::optional<int> seed_count;  // default ceil(node_count / 1000)
    std::uint64_t rng_seed = 42;
    EnergyParams energy;            // dead_threshold <= 0 means "derive"
    AggregationParams agg;
    bool sigma_explicit = false;    // false: sigma derived from formed clusters
    int rounds_max = 2000;
    int transmissions_per_round = 5;
    double sensing_radius = 2.0;
    int rotation_period = 20;  // T_i
    double r_max = 5.0;
    int max_formation_steps = 0;  // 0 -> 4*k
    Protocol protocol = Protocol::ccabc;
    ChRouting routing = ChRouting::greedy;
    LeachParams leach;
};

void validate_config(const SimConfig& cfg);

int default_seed_count(const SimConfig& cfg);

struct RoundMetrics {
    int round = 0;
    int active = 0;
    int standby = 0;
    int dead = 0;
    double coverage = 0.0;
    double energy_total = 0.0;
    double energy_spent = 0.0;
    std::optional<int> first_death_round;
    int ch_count = 0;
};

struct EnergyBreakdown {
    double tx = 0.0;
    double rx = 0.0;
    double aggregation = 0.0;
    double standby = 0.0;

    double total() const { return tx + rx + aggregation + standby; }
};

struct MetricsSeries {
    std::string protocol;
    std::vector<RoundMetrics> rows;
    std::optional<int> first_death_round;
    EnergyBreakdown breakdown;
};

// Greedy geographic forwarding over the current cluster heads: the next hop
// is the head strictly closer to the BS that minimizes hop distance; with
// none left the current head transmits straight to the BS. Returns the CH
// ids visited, starting at `head`; the BS is the implicit final stop.
std::vector<int> route_ch_to_bs(int head, const std::vector<int>& heads, const Network& network);

struct SimResult {
    MetricsSeries metrics;
    std::vector<Event> events;
    Network network;  // post-run node state
    ClusterSet clusters;
    std::vector<FormationSample> formation_log;
    double derived_sigma = 0.0;
    double derived_dead_threshold = 0.0;
    int derived_seed_count = 0;
};

class Simulation {
public:
    explicit Simulation(const SimConfig& cfg);

    // deploy + cluster formation (CCABC) or election state (LEACH); emits
    // the round-0 snapshot
    void setup();

    // one data-collection round; returns the appended metrics row
    const RoundMetrics& round();

    bool all_dead() const;
    SimResult run();  // setup + rounds until rounds_max or network death

    const Network& network() const { return net_; }
    Network& mutable_network() { return net_; }  // scripted-scenario hook
    const ClusterSet& clusters() const { return clusters_; }
    const MetricsSeries& metrics() const { return metrics_; }
    const std::vector<Event>& events() const { return events_; }
    const EnergyParams& effective_energy() const { return energy_; }
    const AggregationParams& effective_agg() const { return agg_; }

private:
    void run_cluster_traffic(const Cluster& cl);
    void route_and_charge_heads();
    void snapshot();
    void charge(int node_id, double amount, double EnergyBreakdown::*category);

    SimConfig cfg_;
    EnergyParams energy_;
    AggregationParams agg_;
    Network net_;
    ClusterSet clusters_;
    std::vector<Event> events_;
    MetricsSeries metrics_;
    std::vector<FormationSample> formation_log_;
    EnergyBreakdown breakdown_;
    LeachState leach_state_;
    Rng rng_;
    Rng leach_rng_{0};
    bool leach_first_setup_done_ = false;
    std::vector<std::pair<int, double>> head_payloads_;
    int round_num_ = 0;
    int seed_count_ = 0;
    double round_spent_ = 0.0;
};

SimResult run_simulation(const SimConfig& cfg);

}  // namespace ccabc
