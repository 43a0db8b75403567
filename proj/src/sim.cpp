#include "ccabc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccabc {

void validate_config(const SimConfig& cfg) {
    if (cfg.width < 1 || cfg.height < 1) throw std::invalid_argument("config: field must be >= 1x1");
    if (cfg.k < 2) throw std::invalid_argument("config: k must be >= 2");
    validate_rules(cfg.rules);
    if (cfg.seed_count && (*cfg.seed_count < 1 || *cfg.seed_count > cfg.width * cfg.height))
        throw std::invalid_argument("config: seed_count must be in [1, node count]");
    if (cfg.energy.epsilon < 0 || cfg.energy.gamma < 0 || cfg.energy.omega < 0 ||
        cfg.energy.standby_per_round < 0 || cfg.energy.initial < 0)
        throw std::invalid_argument("config: energy constants must be >= 0");
    if (cfg.energy.n < 2.0) throw std::invalid_argument("config: path-loss exponent n must be >= 2");
    if (cfg.agg.b0 <= 0) throw std::invalid_argument("config: b0 must be > 0");
    if (cfg.agg.c <= 0) throw std::invalid_argument("config: c must be > 0");
    if (cfg.agg.sigma < 1) throw std::invalid_argument("config: sigma must be >= 1");
    if (cfg.rounds_max < 0) throw std::invalid_argument("config: rounds_max must be >= 0");
    if (cfg.transmissions_per_round < 1)
        throw std::invalid_argument("config: transmissions_per_round must be >= 1");
    if (cfg.sensing_radius <= 0) throw std::invalid_argument("config: sensing_radius must be > 0");
    if (cfg.rotation_period < 1) throw std::invalid_argument("config: rotation_period must be >= 1");
    if (cfg.r_max <= 0) throw std::invalid_argument("config: r_max must be > 0");
    if (cfg.leach.p <= 0.0) throw std::invalid_argument("config: leach.p must be > 0");
}

int default_seed_count(const SimConfig& cfg) {
    const int nodes = cfg.width * cfg.height;
    return std::max(1, (nodes + 999) / 1000);
}

std::vector<int> route_ch_to_bs(int head, const std::vector<int>& heads, const Network& network) {
    std::vector<int> path{head};
    int current = head;
    double current_bs = dist(network.nodes[current].pos, network.bs_pos);
    for (;;) {
        int best = -1;
        double best_hop = 0.0;
        for (int cand : heads) {
            if (cand == current) continue;
            if (dist(network.nodes[cand].pos, network.bs_pos) >= current_bs) continue;
            const double hop = dist(network.nodes[current].pos, network.nodes[cand].pos);
            if (best < 0 || hop < best_hop || (hop == best_hop && cand < best)) {
                best = cand;
                best_hop = hop;
            }
        }
        if (best < 0) break;  // nobody closer: straight to the BS
        path.push_back(best);
        current = best;
        current_bs = dist(network.nodes[current].pos, network.bs_pos);
    }
    return path;
}

Simulation::Simulation(const SimConfig& cfg) : cfg_(cfg), rng_(cfg.rng_seed) {
    validate_config(cfg_);
    energy_ = cfg_.energy;
    agg_ = cfg_.agg;
    metrics_.protocol = cfg_.protocol == Protocol::ccabc ? "ccabc" : "leach";
}

void Simulation::charge(int node_id, double amount, double EnergyBreakdown::*category) {
    Node& n = net_.nodes[node_id];
    const double actual = std::min(n.energy, amount);
    n.energy -= actual;
    breakdown_.*category += actual;
    round_spent_ += actual;
}

void Simulation::setup() {
    net_ = deploy(cfg_.width, cfg_.height, cfg_.bs, cfg_.energy.initial, cfg_.sensing_radius);
    seed_count_ = cfg_.seed_count ? *cfg_.seed_count : default_seed_count(cfg_);

    if (energy_.dead_threshold <= 0.0) {
        // a node is dead once it cannot push one packet across the nominal
        // orbital spacing
        const Vec2 mid{0.5 * (cfg_.width - 1), 0.5 * (cfg_.height - 1)};
        energy_.dead_threshold = tx_energy(agg_.b0, orbital_distance(cfg_.r_max, net_, mid), energy_);
    }

    if (cfg_.protocol == Protocol::ccabc) {
        const auto seeds = select_seed_positions(net_, seed_count_, rng_.fork(1).next_u64());
        FormationOptions opts;
        opts.k = cfg_.k;
        opts.rules = cfg_.rules;
        opts.r_max = cfg_.r_max;
        opts.max_steps = cfg_.max_formation_steps;
        opts.rotation_period = cfg_.rotation_period;
        AggregationParams formation_agg = agg_;  // sigma not derivable yet
        FormationResult formed = generate_clusters(net_, opts, energy_, formation_agg, seeds);
        clusters_ = std::move(formed.set);
        formation_log_ = std::move(formed.log);
        if (!formed.crossover_found) events_.push_back({0, "no_crossover", -1, -1});

        if (!cfg_.sigma_explicit && !clusters_.clusters.empty()) {
            std::size_t smallest = clusters_.clusters.front().members.size();
            for (const Cluster& cl : clusters_.clusters)
                smallest = std::min(smallest, cl.members.size());
            agg_.sigma = static_cast<double>(smallest);
        }
    } else {
        Rng election = rng_.fork(2);
        leach_rng_ = election;
        clusters_.clusters = leach_setup(net_, cfg_.leach, 1, leach_state_, leach_rng_);
        if (!cfg_.sigma_explicit && !clusters_.clusters.empty()) {
            std::size_t smallest = clusters_.clusters.front().members.size();
            for (const Cluster& cl : clusters_.clusters)
                smallest = std::min(smallest, cl.members.size());
            agg_.sigma = static_cast<double>(smallest);
        }
        leach_first_setup_done_ = true;
    }

    round_num_ = 0;
    round_spent_ = 0.0;
    snapshot();
}

void Simulation::run_cluster_traffic(const Cluster& cl) {
    const ClusterFlow flow = build_cluster_flow(net_, cl, cl.head, FlowFilter::active_only,
                                                cfg_.transmissions_per_round, agg_, energy_);
    for (const FlowHop& h : flow.hops) {
        const double radio_bits = std::ceil(h.bits);
        charge(h.from, h.count * tx_energy(radio_bits, h.distance, energy_), &EnergyBreakdown::tx);
        charge(h.to, h.count * rx_energy(radio_bits, energy_), &EnergyBreakdown::rx);
        Node& to = net_.nodes[h.to];
        if (to.role == NodeRole::member) to.role = NodeRole::orbit_relay;
    }
    for (const FlowAggregation& a : flow.aggregations)
        charge(a.node, a.energy_j, &EnergyBreakdown::aggregation);
    head_payloads_.push_back({cl.head, flow.head_payload_bits});
}

void Simulation::route_and_charge_heads() {
    std::vector<int> heads;
    for (const auto& [head, bits] : head_payloads_)
        if (head >= 0 && bits > 0.0) heads.push_back(head);

    for (const auto& [head, bits] : head_payloads_) {
        if (head < 0 || bits <= 0.0) continue;
        const double radio_bits = std::ceil(bits);
        std::vector<int> path = cfg_.routing == ChRouting::greedy && cfg_.protocol == Protocol::ccabc
                                    ? route_ch_to_bs(head, heads, net_)
                                    : std::vector<int>{head};
        for (std::size_t i = 0; i < path.size(); ++i) {
            const Vec2 from = net_.nodes[path[i]].pos;
            const Vec2 to = i + 1 < path.size() ? net_.nodes[path[i + 1]].pos : net_.bs_pos;
            charge(path[i], tx_energy(radio_bits, dist(from, to), energy_), &EnergyBreakdown::tx);
            if (i + 1 < path.size())
                charge(path[i + 1], rx_energy(radio_bits, energy_), &EnergyBreakdown::rx);
        }
    }
}

const RoundMetrics& Simulation::round() {
    ++round_num_;
    round_spent_ = 0.0;
    head_payloads_.clear();

    if (cfg_.protocol == Protocol::leach) {
        if (leach_first_setup_done_ && round_num_ == 1) {
            // clusters from setup() are for round 1
        } else {
            clusters_.clusters = leach_setup(net_, cfg_.leach, round_num_, leach_state_, leach_rng_);
        }
    }

    for (const Cluster& cl : clusters_.clusters) run_cluster_traffic(cl);
    route_and_charge_heads();

    for (const Node& n : net_.nodes)
        if (n.mode == NodeMode::standby)
            charge(n.id, energy_.standby_per_round, &EnergyBreakdown::standby);

    if (cfg_.protocol == Protocol::ccabc) {
        verify_and_replace(net_, clusters_, energy_, cfg_.rotation_period, round_num_, events_);
    } else {
        for (Node& n : net_.nodes) {
            if (n.mode == NodeMode::dead) continue;
            if (n.energy < energy_.dead_threshold) {
                n.mode = NodeMode::dead;
                events_.push_back({round_num_, "death", n.id, -1});
            }
        }
    }

    snapshot();
    return metrics_.rows.back();
}

void Simulation::snapshot() {
    RoundMetrics m;
    m.round = round_num_;
    double total = 0.0;
    for (const Node& n : net_.nodes) {
        total += n.energy;
        switch (n.mode) {
            case NodeMode::active: ++m.active; break;
            case NodeMode::standby: ++m.standby; break;
            case NodeMode::dead: ++m.dead; break;
        }
    }
    m.energy_total = total;
    m.energy_spent = round_spent_;
    m.coverage = coverage(net_);
    if (!metrics_.first_death_round && m.dead > 0) metrics_.first_death_round = round_num_;
    m.first_death_round = metrics_.first_death_round;

    int ch = 0;
    for (const Cluster& cl : clusters_.clusters)
        if (cl.head >= 0 && net_.nodes[cl.head].mode == NodeMode::active) ++ch;
    m.ch_count = ch;

    metrics_.rows.push_back(m);
}

bool Simulation::all_dead() const {
    for (const Node& n : net_.nodes)
        if (n.mode != NodeMode::dead) return false;
    return true;
}

SimResult Simulation::run() {
    setup();
    for (int r = 0; r < cfg_.rounds_max; ++r) {
        round();
        if (all_dead()) break;
    }
    metrics_.breakdown = breakdown_;

    SimResult result;
    result.metrics = metrics_;
    result.events = events_;
    result.network = net_;
    result.clusters = clusters_;
    result.formation_log = formation_log_;
    result.derived_sigma = agg_.sigma;
    result.derived_dead_threshold = energy_.dead_threshold;
    result.derived_seed_count = seed_count_;
    return result;
}

SimResult run_simulation(const SimConfig& cfg) {
    Simulation sim(cfg);
    return sim.run();
}

}  // namespace ccabc
