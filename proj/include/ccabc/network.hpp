#pragma once

#include <optional>
#include <vector>

#include "ccabc/geometry.hpp"

namespace ccabc {

enum class NodeMode { active, standby, dead };
enum class NodeRole { member, orbit_relay, nucleon, cluster_head };

struct Node {
    int id = 0;
    Vec2 pos;
    double energy = 0.0;  // joules, never negative
    NodeMode mode = NodeMode::standby;
    NodeRole role = NodeRole::member;
    std::optional<int> cluster_id;
    std::optional<int> orbit_index;  // 0 = nucleus, increasing outward
    int timer = 0;                   // rounds remaining until rotation
};

// One node per unit cell; node id == cell index (row-major), so the
// CA-cell-to-node mapping is the identity. The field footprint is
// [-0.5, w-0.5) x [-0.5, h-0.5): cells are centred on node positions.
struct Network {
    std::vector<Node> nodes;
    int width = 0;
    int height = 0;
    Vec2 bs_pos;
    double sensing_radius = 2.0;

    int node_count() const { return static_cast<int>(nodes.size()); }
    const Node& node_at_cell(int x, int y) const { return nodes[static_cast<std::size_t>(y) * width + x]; }
    Node& node_at_cell(int x, int y) { return nodes[static_cast<std::size_t>(y) * width + x]; }
};

// Atomic structure: a nucleus surrounded by concentric orbits, each split
// into angular sub-orbits. Binning uses squared distance from the nucleus
// centre with bin width r_od (the paper's "orbital distant r_od^2"), so
// orbits are equal-area rings: nucleus holds d^2 < r_od, orbit bin i >= 1
// holds d^2 in [i*r_od, (i+1)*r_od).
struct Cluster {
    int id = 0;
    std::vector<int> members;
    std::vector<int> nucleus;
    // orbits[m] is orbit bin m+1, split into m+2 angular sectors
    std::vector<std::vector<std::vector<int>>> orbits;
    int head = -1;
    double r_od = 0.0;
    Vec2 center;
};

Network deploy(int width, int height, Vec2 bs, double initial_energy, double sensing_radius);

// Bins the given members around nucleus_center without touching the
// network. The nucleus is never left empty: if no member falls in the
// innermost bin the nearest one is pulled in.
Cluster build_cluster_structure(const Network& network, int cluster_id,
                                const std::vector<int>& members, Vec2 nucleus_center, double r_od);

// build_cluster_structure plus cluster_id / orbit_index / role assignment
// on the network's nodes.
Cluster assign_atomic_structure(Network& network, int cluster_id, const std::vector<int>& members,
                                Vec2 nucleus_center, double r_od);

// Fraction of the field within sensing_radius of at least one active node,
// measured on a fixed raster of kCoverageSamplesPerSide^2 sample points per
// unit cell. Coarser rasters quantize badly because every disc sits on the
// lattice and shares one radius, so per-disc errors add up systematically.
inline constexpr int kCoverageSamplesPerSide = 8;

double coverage(const Network& network);
double coverage_sampled(const Network& network, int samples_per_side);

}  // namespace ccabc
