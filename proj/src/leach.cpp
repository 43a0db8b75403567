#include "ccabc/leach.hpp"

#include <cmath>
#include <stdexcept>

namespace ccabc {

double LeachParams::effective_p() const {
    return std::min(p, 0.99);  // p >= 1 is degenerate input
}

int LeachParams::rounds_per_epoch() const {
    return std::max(1, static_cast<int>(std::lround(1.0 / effective_p())));
}

std::vector<Cluster> leach_setup(Network& network, const LeachParams& params, int round,
                                 LeachState& state, Rng& rng) {
    if (params.p <= 0.0) throw std::invalid_argument("leach: p must be > 0");
    const double p = params.effective_p();

    if (state.served_this_epoch.size() != network.nodes.size())
        state.served_this_epoch.assign(network.nodes.size(), 0);

    const int rpe = params.rounds_per_epoch();
    const int r_mod = (round - 1) % rpe;
    if (r_mod == 0) std::fill(state.served_this_epoch.begin(), state.served_this_epoch.end(), 0);

    const double threshold = p / (1.0 - p * static_cast<double>(r_mod));

    std::vector<int> heads;
    for (Node& n : network.nodes) {
        if (n.mode == NodeMode::dead) continue;
        n.mode = NodeMode::active;
        n.role = NodeRole::member;
        n.cluster_id.reset();
        n.orbit_index.reset();
        const double u = rng.next_double();
        if (!state.served_this_epoch[n.id] && u < threshold) {
            heads.push_back(n.id);
            state.served_this_epoch[n.id] = 1;
        }
    }

    if (heads.empty()) {
        int best = -1;
        double best_energy = -1.0;
        for (const Node& n : network.nodes) {
            if (n.mode == NodeMode::dead) continue;
            if (n.energy > best_energy || (n.energy == best_energy && n.id < best)) {
                best = n.id;
                best_energy = n.energy;
            }
        }
        if (best < 0) return {};  // fully dead network
        heads.push_back(best);
        state.served_this_epoch[best] = 1;
    }

    std::vector<Cluster> clusters(heads.size());
    for (std::size_t i = 0; i < heads.size(); ++i) {
        clusters[i].id = static_cast<int>(i);
        clusters[i].head = heads[i];
        clusters[i].center = network.nodes[heads[i]].pos;
        clusters[i].r_od = 0.0;
    }

    for (Node& n : network.nodes) {
        if (n.mode == NodeMode::dead) continue;
        int best = 0;
        double best_d2 = dist2(n.pos, clusters[0].center);
        for (std::size_t i = 1; i < clusters.size(); ++i) {
            const double d2 = dist2(n.pos, clusters[i].center);
            if (d2 < best_d2) {
                best = static_cast<int>(i);
                best_d2 = d2;
            }
        }
        clusters[best].members.push_back(n.id);
        clusters[best].nucleus.push_back(n.id);
        n.cluster_id = best;
        n.orbit_index = 0;
        n.role = n.id == clusters[best].head ? NodeRole::cluster_head : NodeRole::member;
    }
    return clusters;
}

}  // namespace ccabc
