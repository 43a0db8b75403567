#pragma once

#include <utility>
#include <vector>

namespace ccabc {

struct EnergyParams;

enum class AggregationModel { entropy_eq10, ccabc_eq11 };

struct AggregationParams {
    double b0 = 800.0;  // bits generated per source message
    double c = 10.0;    // spatial-correlation constant, metres
    double sigma = 1.0; // minimum cluster size
    AggregationModel model = AggregationModel::ccabc_eq11;
};

// Entropy-based compression: b0 + (s-1) * (1 - 1/(d0/c + 1)) * b0.
double compressed_bits_entropy(int sources, double d0, const AggregationParams& p);

// CCABC compression: b0 + (s-1) * (1 - ln2 * exp(-d0/(sigma + s))) * b0.
double compressed_bits_ccabc(int sources, double d0, const AggregationParams& p);

double compressed_bits(int sources, double d0, const AggregationParams& p);

struct Incoming {
    double bits = 0.0;
    double source_distance = 0.0;
};

struct AggregateResult {
    double out_bits = 0.0;
    double energy_j = 0.0;
};

// Collector-side aggregation of one hop. s = incoming count + 1 (the
// collector's own reading), d0 = mean source distance. The aggregation
// charge is omega per received bit; the collector's own bits are free.
AggregateResult aggregate_at_collector(const std::vector<Incoming>& incoming, double own_bits,
                                       const AggregationParams& p, const EnergyParams& energy);

}  // namespace ccabc
