#pragma once

#include <vector>

#include "ccabc/network.hpp"
#include "ccabc/rng.hpp"

namespace ccabc {

struct LeachParams {
    double p = 0.05;  // desired CH fraction per round
    double effective_p() const;
    int rounds_per_epoch() const;
};

struct LeachState {
    std::vector<char> served_this_epoch;
};

// One LEACH set-up phase: every alive node goes active, eligible nodes
// self-elect with the rotation threshold p / (1 - p * (round mod 1/p)),
// members join the nearest head. A node that served as CH in the current
// epoch stays ineligible until the epoch ends. Zero elected heads forces
// the highest-energy node. Clusters have no atomic structure: members sit
// in the nucleus so traffic is single-hop member -> CH.
std::vector<Cluster> leach_setup(Network& network, const LeachParams& params, int round,
                                 LeachState& state, Rng& rng);

}  // namespace ccabc
