#include "ccabc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ccabc {

namespace {

using nlohmann::json;

void require_known_keys(const json& obj, const std::string& scope,
                        const std::set<std::string>& known) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key))
            throw ConfigError("config: unknown key \"" + (scope.empty() ? key : scope + "." + key) + "\"");
    }
}

template <typename T>
T get_or(const json& obj, const std::string& scope, const std::string& key, T fallback) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: key \"" + (scope.empty() ? key : scope + "." + key) +
                          "\" has the wrong type");
    }
}

}  // namespace

SimConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: parse error: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");

    require_known_keys(root, "",
                       {"field", "bs", "k", "theta", "neighbourhood", "seed_count", "rng_seed",
                        "protocol", "rounds_max", "transmissions_per_round", "sensing_radius",
                        "rotation_period", "r_max", "max_formation_steps", "ch_routing", "energy",
                        "aggregation", "leach"});

    SimConfig cfg;

    if (root.contains("field")) {
        const json& f = root.at("field");
        require_known_keys(f, "field", {"width", "height"});
        cfg.width = get_or(f, "field", "width", cfg.width);
        cfg.height = get_or(f, "field", "height", cfg.height);
    }
    if (root.contains("bs")) {
        const json& b = root.at("bs");
        if (!b.is_array() || b.size() != 2) throw ConfigError("config: key \"bs\" must be [x, y]");
        cfg.bs = {b[0].get<double>(), b[1].get<double>()};
    }
    cfg.k = get_or(root, "", "k", cfg.k);
    cfg.rules.theta = get_or(root, "", "theta", cfg.rules.theta);

    const std::string nb = get_or<std::string>(root, "", "neighbourhood", "moore9");
    if (nb == "moore9") cfg.rules.neighbourhood = Neighbourhood::moore9;
    else if (nb == "vonneumann5") cfg.rules.neighbourhood = Neighbourhood::vonneumann5;
    else throw ConfigError("config: key \"neighbourhood\" must be moore9 or vonneumann5");

    if (root.contains("seed_count") && !root.at("seed_count").is_null())
        cfg.seed_count = get_or<int>(root, "", "seed_count", 0);
    cfg.rng_seed = get_or<std::uint64_t>(root, "", "rng_seed", cfg.rng_seed);

    const std::string proto = get_or<std::string>(root, "", "protocol", "ccabc");
    if (proto == "ccabc") cfg.protocol = Protocol::ccabc;
    else if (proto == "leach") cfg.protocol = Protocol::leach;
    else throw ConfigError("config: key \"protocol\" must be ccabc or leach");

    cfg.rounds_max = get_or(root, "", "rounds_max", cfg.rounds_max);
    cfg.transmissions_per_round =
        get_or(root, "", "transmissions_per_round", cfg.transmissions_per_round);
    cfg.sensing_radius = get_or(root, "", "sensing_radius", cfg.sensing_radius);
    cfg.rotation_period = get_or(root, "", "rotation_period", cfg.rotation_period);
    cfg.r_max = get_or(root, "", "r_max", cfg.r_max);
    cfg.max_formation_steps = get_or(root, "", "max_formation_steps", cfg.max_formation_steps);

    const std::string routing = get_or<std::string>(root, "", "ch_routing", "greedy");
    if (routing == "greedy") cfg.routing = ChRouting::greedy;
    else if (routing == "direct") cfg.routing = ChRouting::direct;
    else throw ConfigError("config: key \"ch_routing\" must be greedy or direct");

    if (root.contains("energy")) {
        const json& e = root.at("energy");
        require_known_keys(e, "energy",
                           {"epsilon", "gamma", "omega", "path_loss_exponent", "standby_per_round",
                            "initial", "dead_threshold"});
        cfg.energy.epsilon = get_or(e, "energy", "epsilon", cfg.energy.epsilon);
        cfg.energy.gamma = get_or(e, "energy", "gamma", cfg.energy.gamma);
        cfg.energy.omega = get_or(e, "energy", "omega", cfg.energy.omega);
        cfg.energy.n = get_or(e, "energy", "path_loss_exponent", cfg.energy.n);
        cfg.energy.standby_per_round = get_or(e, "energy", "standby_per_round", cfg.energy.standby_per_round);
        cfg.energy.initial = get_or(e, "energy", "initial", cfg.energy.initial);
        cfg.energy.dead_threshold = get_or(e, "energy", "dead_threshold", 0.0);
    }

    if (root.contains("aggregation")) {
        const json& a = root.at("aggregation");
        require_known_keys(a, "aggregation", {"model", "b0", "c", "sigma"});
        const std::string model = get_or<std::string>(a, "aggregation", "model", "ccabc_eq11");
        if (model == "ccabc_eq11") cfg.agg.model = AggregationModel::ccabc_eq11;
        else if (model == "entropy_eq10") cfg.agg.model = AggregationModel::entropy_eq10;
        else throw ConfigError("config: key \"aggregation.model\" must be ccabc_eq11 or entropy_eq10");
        cfg.agg.b0 = get_or(a, "aggregation", "b0", cfg.agg.b0);
        cfg.agg.c = get_or(a, "aggregation", "c", cfg.agg.c);
        if (a.contains("sigma") && !a.at("sigma").is_null()) {
            cfg.agg.sigma = get_or(a, "aggregation", "sigma", cfg.agg.sigma);
            cfg.sigma_explicit = true;
        }
    }

    if (root.contains("leach")) {
        const json& l = root.at("leach");
        require_known_keys(l, "leach", {"p"});
        cfg.leach.p = get_or(l, "leach", "p", cfg.leach.p);
        if (cfg.leach.p >= 1.0) cfg.leach.p = 0.99;  // degenerate input, clamp
    }

    try {
        validate_config(cfg);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const SimConfig& cfg) {
    json root;
    root["field"] = {{"width", cfg.width}, {"height", cfg.height}};
    root["bs"] = {cfg.bs.x, cfg.bs.y};
    root["k"] = cfg.k;
    root["theta"] = cfg.rules.theta;
    root["neighbourhood"] =
        cfg.rules.neighbourhood == Neighbourhood::moore9 ? "moore9" : "vonneumann5";
    if (cfg.seed_count) root["seed_count"] = *cfg.seed_count;
    else root["seed_count"] = default_seed_count(cfg);
    root["rng_seed"] = cfg.rng_seed;
    root["protocol"] = cfg.protocol == Protocol::ccabc ? "ccabc" : "leach";
    root["rounds_max"] = cfg.rounds_max;
    root["transmissions_per_round"] = cfg.transmissions_per_round;
    root["sensing_radius"] = cfg.sensing_radius;
    root["rotation_period"] = cfg.rotation_period;
    root["r_max"] = cfg.r_max;
    root["max_formation_steps"] = cfg.max_formation_steps;
    root["ch_routing"] = cfg.routing == ChRouting::greedy ? "greedy" : "direct";
    root["energy"] = {{"epsilon", cfg.energy.epsilon},
                      {"gamma", cfg.energy.gamma},
                      {"omega", cfg.energy.omega},
                      {"path_loss_exponent", cfg.energy.n},
                      {"standby_per_round", cfg.energy.standby_per_round},
                      {"initial", cfg.energy.initial},
                      {"dead_threshold", cfg.energy.dead_threshold}};
    root["aggregation"] = {
        {"model", cfg.agg.model == AggregationModel::ccabc_eq11 ? "ccabc_eq11" : "entropy_eq10"},
        {"b0", cfg.agg.b0},
        {"c", cfg.agg.c},
        {"sigma", cfg.sigma_explicit ? json(cfg.agg.sigma) : json(nullptr)}};
    root["leach"] = {{"p", cfg.leach.p}};
    return root.dump(2);
}

std::uint64_t config_hash(const SimConfig& cfg) {
    const std::string s = config_to_json(cfg);
    return fnv1a64(s.data(), s.size());
}

std::string default_config_json() {
    return config_to_json(SimConfig{});
}

}  // namespace ccabc
