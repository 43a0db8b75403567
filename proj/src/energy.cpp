#include "ccabc/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ccabc {

double tx_energy(double bits, double distance, const EnergyParams& p) {
    if (bits < 0.0 || distance < 0.0) throw std::invalid_argument("tx_energy: negative input");
    return bits * p.epsilon + bits * p.gamma * std::pow(distance, p.n);
}

double rx_energy(double bits, const EnergyParams& p) {
    if (bits < 0.0) throw std::invalid_argument("rx_energy: negative input");
    return bits * p.epsilon;
}

double ch_transmit_cost(double bits, double distance, const EnergyParams& p) {
    return bits * ((p.epsilon + p.omega) + p.gamma * std::pow(distance, p.n));
}

double inter_cluster_cost(const Network& network, const std::vector<Cluster>& clusters,
                          const std::vector<std::vector<int>>& routes, double bits_per_ch,
                          const EnergyParams& p) {
    if (routes.size() != clusters.size())
        throw std::invalid_argument("inter_cluster_cost: one route per cluster required");
    double total = 0.0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        const Cluster& cl = clusters[i];
        if (cl.head < 0) throw std::invalid_argument("inter_cluster_cost: cluster without head");
        const auto& route = routes[i];
        if (route.empty() || route.front() != cl.head)
            throw std::invalid_argument("inter_cluster_cost: route must start at the cluster head");
        const Vec2 head_pos = network.nodes[cl.head].pos;
        const Vec2 next = route.size() > 1 ? network.nodes[route[1]].pos : network.bs_pos;
        total += ch_transmit_cost(bits_per_ch, dist(head_pos, next), p);
    }
    return total;
}

namespace {

int nearest_to(const Network& net, const std::vector<int>& ids, Vec2 p) {
    int best = -1;
    double best_d2 = 0.0;
    for (int id : ids) {
        const double d2 = dist2(net.nodes[id].pos, p);
        if (best < 0 || d2 < best_d2 || (d2 == best_d2 && id < best)) {
            best = id;
            best_d2 = d2;
        }
    }
    return best;
}

bool passes(const Node& n, FlowFilter f) {
    if (n.mode == NodeMode::dead) return false;
    return f == FlowFilter::all_alive || n.mode == NodeMode::active;
}

}  // namespace

ClusterFlow build_cluster_flow(const Network& network, const Cluster& cluster, int head,
                               FlowFilter filter, int messages_per_member,
                               const AggregationParams& agg, const EnergyParams& energy) {
    ClusterFlow flow;
    flow.head = head;
    const double b0 = agg.b0;
    const int T = messages_per_member;

    // payload cascading inward through the orbit chain
    double chain_bits = 0.0;
    int chain_carrier = -1;

    for (int m = static_cast<int>(cluster.orbits.size()) - 1; m >= 0; --m) {
        const auto& orbit = cluster.orbits[m];

        // sub-orbit stage: members push readings to their sector collector
        std::vector<int> sector_collectors;
        std::vector<double> sector_payloads;
        for (const auto& sector : orbit) {
            std::vector<int> contributors;
            for (int id : sector)
                if (passes(network.nodes[id], filter)) contributors.push_back(id);
            if (contributors.empty()) continue;
            const int collector = nearest_to(network, contributors, cluster.center);
            std::vector<Incoming> incoming;
            for (int id : contributors) {
                if (id == collector) continue;
                const double d = dist(network.nodes[id].pos, network.nodes[collector].pos);
                flow.hops.push_back({id, collector, b0, d, T});
                incoming.push_back({T * b0, d});
            }
            const AggregateResult res = aggregate_at_collector(incoming, b0, agg, energy);
            if (res.energy_j > 0.0) flow.aggregations.push_back({collector, res.energy_j});
            sector_collectors.push_back(collector);
            sector_payloads.push_back(res.out_bits);
        }
        if (sector_collectors.empty()) continue;  // orbit has nothing to send

        // orbit stage: sector collectors feed the orbit collector, plus the
        // payload relayed in from the next orbit out
        const int oc = nearest_to(network, sector_collectors, cluster.center);
        double oc_own = 0.0;
        std::vector<Incoming> incoming;
        for (std::size_t s = 0; s < sector_collectors.size(); ++s) {
            const int id = sector_collectors[s];
            if (id == oc) {
                oc_own = sector_payloads[s];
                continue;
            }
            const double d = dist(network.nodes[id].pos, network.nodes[oc].pos);
            flow.hops.push_back({id, oc, sector_payloads[s], d, 1});
            incoming.push_back({sector_payloads[s], d});
        }
        if (chain_carrier >= 0) {
            const double d = dist(network.nodes[chain_carrier].pos, network.nodes[oc].pos);
            flow.hops.push_back({chain_carrier, oc, chain_bits, d, 1});
            incoming.push_back({chain_bits, d});
        }
        const AggregateResult res = aggregate_at_collector(incoming, oc_own, agg, energy);
        if (res.energy_j > 0.0) flow.aggregations.push_back({oc, res.energy_j});
        chain_bits = res.out_bits;
        chain_carrier = oc;
    }

    // nucleus stage: nucleons report straight to the head, the orbit chain
    // delivers its aggregate, and the head produces the cluster payload
    if (head < 0 || !passes(network.nodes[head], filter)) {
        // dormant cluster: whatever reached the chain carrier goes nowhere
        flow.head_payload_bits = 0.0;
        flow.head = -1;
        return flow;
    }
    std::vector<Incoming> incoming;
    for (int id : cluster.nucleus) {
        if (id == head || !passes(network.nodes[id], filter)) continue;
        const double d = dist(network.nodes[id].pos, network.nodes[head].pos);
        flow.hops.push_back({id, head, b0, d, T});
        incoming.push_back({T * b0, d});
    }
    if (chain_carrier >= 0) {
        const double d = dist(network.nodes[chain_carrier].pos, network.nodes[head].pos);
        flow.hops.push_back({chain_carrier, head, chain_bits, d, 1});
        incoming.push_back({chain_bits, d});
    }
    const AggregateResult res = aggregate_at_collector(incoming, b0, agg, energy);
    if (res.energy_j > 0.0) flow.aggregations.push_back({head, res.energy_j});
    flow.head_payload_bits = res.out_bits;
    return flow;
}

double intra_cluster_cost(const Cluster& cluster, const Network& network, double bits_per_member,
                          const EnergyParams& p, const AggregationParams& agg) {
    AggregationParams eval_agg = agg;
    eval_agg.b0 = bits_per_member;
    int head = cluster.head;
    if (head < 0 || network.nodes[head].mode == NodeMode::dead)
        head = nearest_to(network, cluster.nucleus, cluster.center);
    const ClusterFlow flow =
        build_cluster_flow(network, cluster, head, FlowFilter::all_alive, 1, eval_agg, p);
    double total = 0.0;
    for (const FlowHop& h : flow.hops)
        total += h.count * h.bits * (p.epsilon + p.gamma * std::pow(h.distance, p.n));
    return total;
}

double orbital_distance(double r_max, const Network& network, Vec2 center) {
    if (r_max <= 0.0) throw std::invalid_argument("orbital_distance: r_max must be > 0");
    const double r2 = r_max * r_max;
    int neighbours = 0;
    for (const Node& n : network.nodes)
        if (n.mode != NodeMode::dead && dist2(n.pos, center) <= r2) ++neighbours;
    if (neighbours == 0) return r_max;  // sparse fallback

    const double density = neighbours / (std::numbers::pi * r2);
    const double r_min = 1.0 / std::sqrt(density);
    if (r_min >= r_max) return r_max;
    return std::clamp(std::sqrt(r_max * r_min), r_min, r_max);
}

}  // namespace ccabc
