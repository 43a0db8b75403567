#pragma once

#include <string>
#include <vector>

#include "ccabc/sim.hpp"

namespace ccabc {

// 9-significant-digit decimal formatting via std::to_chars, so output bytes
// do not depend on the locale or the toolchain's printf.
std::string fmt_g9(double v);

std::string metrics_to_csv(const MetricsSeries& series);
MetricsSeries parse_metrics_csv(const std::string& text, const std::string& name);

std::string events_to_jsonl(const std::vector<Event>& events);

// id,x,y,energy,mode,role,cluster_id,orbit_index
std::string node_table_csv(const Network& network);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

struct RunManifest {
    std::string config_hash;  // hex
    std::uint64_t rng_seed = 0;
    std::string code_version;
    std::vector<std::string> outputs;
    double duration_seconds = 0.0;
    std::string effective_config_json;
    double derived_sigma = 0.0;
    double derived_dead_threshold = 0.0;
    int derived_seed_count = 0;
};

std::string manifest_to_json(const RunManifest& m);

inline constexpr const char* kCodeVersion = "0.1.0";

}  // namespace ccabc
