#include "ccabc/metrics_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ccabc {

std::string fmt_g9(double v) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

std::string metrics_to_csv(const MetricsSeries& series) {
    std::string out = "round,active,standby,dead,coverage,energy_total,energy_spent,ch_count\n";
    for (const RoundMetrics& m : series.rows) {
        out += std::to_string(m.round);
        out += ',';
        out += std::to_string(m.active);
        out += ',';
        out += std::to_string(m.standby);
        out += ',';
        out += std::to_string(m.dead);
        out += ',';
        out += fmt_g9(m.coverage);
        out += ',';
        out += fmt_g9(m.energy_total);
        out += ',';
        out += fmt_g9(m.energy_spent);
        out += ',';
        out += std::to_string(m.ch_count);
        out += '\n';
    }
    return out;
}

MetricsSeries parse_metrics_csv(const std::string& text, const std::string& name) {
    MetricsSeries series;
    series.protocol = name;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("metrics csv: empty input");
    if (line != "round,active,standby,dead,coverage,energy_total,energy_spent,ch_count")
        throw std::runtime_error("metrics csv: unexpected header: " + line);

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        RoundMetrics m;
        std::istringstream ls(line);
        std::string field;
        auto next = [&](const char* what) {
            if (!std::getline(ls, field, ','))
                throw std::runtime_error(std::string("metrics csv: missing field ") + what);
            return field;
        };
        m.round = std::stoi(next("round"));
        m.active = std::stoi(next("active"));
        m.standby = std::stoi(next("standby"));
        m.dead = std::stoi(next("dead"));
        m.coverage = std::stod(next("coverage"));
        m.energy_total = std::stod(next("energy_total"));
        m.energy_spent = std::stod(next("energy_spent"));
        m.ch_count = std::stoi(next("ch_count"));
        if (!series.first_death_round && m.dead > 0) series.first_death_round = m.round;
        m.first_death_round = series.first_death_round;
        series.rows.push_back(m);
    }
    return series;
}

std::string events_to_jsonl(const std::vector<Event>& events) {
    std::string out;
    for (const Event& e : events) {
        out += "{\"round\":" + std::to_string(e.round) + ",\"kind\":\"" + e.kind + "\"";
        if (e.node >= 0) out += ",\"node\":" + std::to_string(e.node);
        if (e.other >= 0) out += ",\"other\":" + std::to_string(e.other);
        out += "}\n";
    }
    return out;
}

namespace {

const char* mode_name(NodeMode m) {
    switch (m) {
        case NodeMode::active: return "active";
        case NodeMode::standby: return "standby";
        case NodeMode::dead: return "dead";
    }
    return "?";
}

const char* role_name(NodeRole r) {
    switch (r) {
        case NodeRole::member: return "member";
        case NodeRole::orbit_relay: return "orbit_relay";
        case NodeRole::nucleon: return "nucleon";
        case NodeRole::cluster_head: return "cluster_head";
    }
    return "?";
}

}  // namespace

std::string node_table_csv(const Network& network) {
    std::string out = "id,x,y,energy,mode,role,cluster_id,orbit_index\n";
    for (const Node& n : network.nodes) {
        out += std::to_string(n.id);
        out += ',';
        out += fmt_g9(n.pos.x);
        out += ',';
        out += fmt_g9(n.pos.y);
        out += ',';
        out += fmt_g9(n.energy);
        out += ',';
        out += mode_name(n.mode);
        out += ',';
        out += role_name(n.role);
        out += ',';
        out += n.cluster_id ? std::to_string(*n.cluster_id) : std::string();
        out += ',';
        out += n.orbit_index ? std::to_string(*n.orbit_index) : std::string();
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("io: cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("io: write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("io: cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string manifest_to_json(const RunManifest& m) {
    nlohmann::json j;
    j["config_hash"] = m.config_hash;
    j["rng_seed"] = m.rng_seed;
    j["code_version"] = m.code_version;
    j["outputs"] = m.outputs;
    j["duration_seconds"] = m.duration_seconds;
    j["effective_config"] = nlohmann::json::parse(m.effective_config_json);
    j["derived"] = {{"sigma", m.derived_sigma},
                    {"dead_threshold", m.derived_dead_threshold},
                    {"seed_count", m.derived_seed_count}};
    return j.dump(2) + "\n";
}

}  // namespace ccabc
