#include "ccabc/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ccabc {

Network deploy(int width, int height, Vec2 bs, double initial_energy, double sensing_radius) {
    if (width < 1 || height < 1) throw std::invalid_argument("deploy: field must be >= 1x1");

    Network net;
    net.width = width;
    net.height = height;
    net.bs_pos = bs;
    net.sensing_radius = sensing_radius;
    net.nodes.resize(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            Node& n = net.node_at_cell(x, y);
            n.id = y * width + x;
            n.pos = {static_cast<double>(x), static_cast<double>(y)};
            n.energy = initial_energy;
            n.mode = NodeMode::standby;
            n.role = NodeRole::member;
        }
    }
    return net;
}

Cluster build_cluster_structure(const Network& network, int cluster_id,
                                const std::vector<int>& members, Vec2 nucleus_center, double r_od) {
    if (members.empty()) throw std::invalid_argument("atomic structure: empty member set");
    if (r_od <= 0.0) throw std::invalid_argument("atomic structure: r_od must be > 0");

    Cluster cl;
    cl.id = cluster_id;
    cl.members = members;
    cl.center = nucleus_center;
    cl.r_od = r_od;

    // bin index by squared distance, width r_od; bin 0 is the nucleus
    int max_bin = 0;
    std::vector<int> bins(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        const double d2 = dist2(network.nodes[members[i]].pos, nucleus_center);
        const int bin = static_cast<int>(d2 / r_od);
        bins[i] = bin;
        max_bin = std::max(max_bin, bin);
    }

    if (std::none_of(bins.begin(), bins.end(), [](int b) { return b == 0; })) {
        // nucleus must be non-empty: reassign the nearest member
        std::size_t best = 0;
        double best_d2 = dist2(network.nodes[members[0]].pos, nucleus_center);
        for (std::size_t i = 1; i < members.size(); ++i) {
            const double d2 = dist2(network.nodes[members[i]].pos, nucleus_center);
            if (d2 < best_d2 || (d2 == best_d2 && members[i] < members[best])) {
                best = i;
                best_d2 = d2;
            }
        }
        bins[best] = 0;
    }

    cl.orbits.assign(max_bin, {});
    for (int m = 0; m < max_bin; ++m) cl.orbits[m].assign(static_cast<std::size_t>(m) + 2, {});

    for (std::size_t i = 0; i < members.size(); ++i) {
        const Node& n = network.nodes[members[i]];
        if (bins[i] == 0) {
            cl.nucleus.push_back(members[i]);
        } else {
            auto& orbit = cl.orbits[bins[i] - 1];
            const int sectors = static_cast<int>(orbit.size());
            const double angle = std::atan2(n.pos.y - nucleus_center.y, n.pos.x - nucleus_center.x);
            int sector = static_cast<int>((angle + std::numbers::pi) / (2.0 * std::numbers::pi) * sectors);
            sector = std::clamp(sector, 0, sectors - 1);
            orbit[sector].push_back(members[i]);
        }
    }

    // trailing orbits can end up empty after the nucleus repair
    while (!cl.orbits.empty()) {
        bool any = false;
        for (const auto& sub : cl.orbits.back())
            if (!sub.empty()) any = true;
        if (any) break;
        cl.orbits.pop_back();
    }
    return cl;
}

Cluster assign_atomic_structure(Network& network, int cluster_id, const std::vector<int>& members,
                                Vec2 nucleus_center, double r_od) {
    Cluster cl = build_cluster_structure(network, cluster_id, members, nucleus_center, r_od);
    for (int id : cl.nucleus) {
        Node& n = network.nodes[id];
        n.cluster_id = cluster_id;
        n.orbit_index = 0;
        n.role = NodeRole::nucleon;
    }
    for (std::size_t m = 0; m < cl.orbits.size(); ++m) {
        for (const auto& sector : cl.orbits[m]) {
            for (int id : sector) {
                Node& n = network.nodes[id];
                n.cluster_id = cluster_id;
                n.orbit_index = static_cast<int>(m) + 1;
                n.role = NodeRole::member;
            }
        }
    }
    return cl;
}

double coverage_sampled(const Network& network, int samples_per_side) {
    if (network.sensing_radius <= 0.0) throw std::invalid_argument("coverage: sensing_radius must be > 0");

    const int m = samples_per_side;  // samples at x = (i + 0.5)/m - 0.5
    const double inv_m = 1.0 / m;
    const int sw = m * network.width;
    const int sh = m * network.height;
    std::vector<char> covered(static_cast<std::size_t>(sw) * sh, 0);

    const double r = network.sensing_radius;
    const double r2 = r * r;
    auto sample_coord = [&](int i) { return (i + 0.5) * inv_m - 0.5; };

    for (const Node& n : network.nodes) {
        if (n.mode != NodeMode::active) continue;
        const int i_lo = std::max(0, static_cast<int>(std::ceil((n.pos.x - r + 0.5) * m - 0.5)));
        const int i_hi = std::min(sw - 1, static_cast<int>(std::floor((n.pos.x + r + 0.5) * m - 0.5)));
        const int j_lo = std::max(0, static_cast<int>(std::ceil((n.pos.y - r + 0.5) * m - 0.5)));
        const int j_hi = std::min(sh - 1, static_cast<int>(std::floor((n.pos.y + r + 0.5) * m - 0.5)));
        for (int j = j_lo; j <= j_hi; ++j) {
            const double dy = sample_coord(j) - n.pos.y;
            for (int i = i_lo; i <= i_hi; ++i) {
                const double dx = sample_coord(i) - n.pos.x;
                if (dx * dx + dy * dy <= r2) covered[static_cast<std::size_t>(j) * sw + i] = 1;
            }
        }
    }

    std::size_t hit = 0;
    for (char c : covered) hit += static_cast<std::size_t>(c);
    return static_cast<double>(hit) / static_cast<double>(covered.size());
}

double coverage(const Network& network) {
    return coverage_sampled(network, kCoverageSamplesPerSide);
}

}  // namespace ccabc
