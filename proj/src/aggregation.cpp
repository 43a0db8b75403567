#include "ccabc/aggregation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ccabc/energy.hpp"

namespace ccabc {

double compressed_bits_entropy(int sources, double d0, const AggregationParams& p) {
    if (sources < 1) throw std::invalid_argument("aggregation: sources must be >= 1");
    if (d0 < 0.0) throw std::invalid_argument("aggregation: d0 must be >= 0");
    const double share = 1.0 - 1.0 / (d0 / p.c + 1.0);
    return p.b0 + (sources - 1) * share * p.b0;
}

double compressed_bits_ccabc(int sources, double d0, const AggregationParams& p) {
    if (sources < 1) throw std::invalid_argument("aggregation: sources must be >= 1");
    if (d0 < 0.0) throw std::invalid_argument("aggregation: d0 must be >= 0");
    const double share = 1.0 - std::numbers::ln2 * std::exp(-d0 / (p.sigma + sources));
    return p.b0 + (sources - 1) * share * p.b0;
}

double compressed_bits(int sources, double d0, const AggregationParams& p) {
    return p.model == AggregationModel::entropy_eq10 ? compressed_bits_entropy(sources, d0, p)
                                                     : compressed_bits_ccabc(sources, d0, p);
}

AggregateResult aggregate_at_collector(const std::vector<Incoming>& incoming, double own_bits,
                                       const AggregationParams& p, const EnergyParams& energy) {
    if (incoming.empty()) return {own_bits, 0.0};

    double total_bits = 0.0;
    double total_dist = 0.0;
    for (const auto& in : incoming) {
        total_bits += in.bits;
        total_dist += in.source_distance;
    }
    const int s = static_cast<int>(incoming.size()) + 1;
    const double d0 = total_dist / static_cast<double>(incoming.size());
    return {compressed_bits(s, d0, p), energy.omega * total_bits};
}

}  // namespace ccabc
