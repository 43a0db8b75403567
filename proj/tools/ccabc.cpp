#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccabc/config.hpp"
#include "ccabc/metrics_io.hpp"
#include "ccabc/plots.hpp"
#include "ccabc/sim.hpp"

namespace fs = std::filesystem;
using namespace ccabc;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    bool quiet = false;
};

SimConfig load_with_overrides(const CommonOpts& opts) {
    SimConfig cfg = load_config(opts.config_path);
    if (opts.seed) cfg.rng_seed = *opts.seed;
    return cfg;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunManifest make_manifest(const SimConfig& cfg, const SimResult& result,
                          const std::vector<std::string>& outputs, double seconds) {
    RunManifest m;
    m.config_hash = hash_hex(config_hash(cfg));
    m.rng_seed = cfg.rng_seed;
    m.code_version = kCodeVersion;
    m.outputs = outputs;
    m.duration_seconds = seconds;
    m.effective_config_json = config_to_json(cfg);
    m.derived_sigma = result.derived_sigma;
    m.derived_dead_threshold = result.derived_dead_threshold;
    m.derived_seed_count = result.derived_seed_count;
    return m;
}

int cmd_run(const CommonOpts& opts, bool dump_nodes) {
    const auto t0 = std::chrono::steady_clock::now();
    SimConfig cfg = load_with_overrides(opts);
    SimResult result = run_simulation(cfg);

    fs::create_directories(opts.out_dir);
    std::vector<std::string> outputs;
    const std::string csv_path = opts.out_dir + "/metrics.csv";
    write_text_file(csv_path, metrics_to_csv(result.metrics));
    outputs.push_back(csv_path);
    const std::string ev_path = opts.out_dir + "/events.jsonl";
    write_text_file(ev_path, events_to_jsonl(result.events));
    outputs.push_back(ev_path);
    for (const std::string& p : render_plots({result.metrics}, opts.out_dir)) outputs.push_back(p);
    if (dump_nodes) {
        const std::string nodes_path = opts.out_dir + "/nodes.csv";
        write_text_file(nodes_path, node_table_csv(result.network));
        outputs.push_back(nodes_path);
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_text_file(opts.out_dir + "/manifest.json",
                    manifest_to_json(make_manifest(cfg, result, outputs, secs)));

    if (!opts.quiet) {
        const RoundMetrics& last = result.metrics.rows.back();
        std::cout << result.metrics.protocol << ": " << last.round << " rounds, first death "
                  << (result.metrics.first_death_round ? std::to_string(*result.metrics.first_death_round)
                                                       : std::string("none"))
                  << ", final coverage " << fmt_g9(100.0 * last.coverage) << "%, energy left "
                  << fmt_g9(last.energy_total) << " J\n";
        std::cout << "outputs in " << opts.out_dir << "\n";
    }
    return 0;
}

int cmd_compare(const CommonOpts& opts, const std::string& protocols) {
    const auto t0 = std::chrono::steady_clock::now();
    SimConfig base = load_with_overrides(opts);

    std::vector<std::string> names;
    for (std::size_t pos = 0; pos < protocols.size();) {
        const std::size_t comma = protocols.find(',', pos);
        names.push_back(protocols.substr(pos, comma == std::string::npos ? comma : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (names.empty()) throw ConfigError("compare: --protocols must list at least one protocol");

    fs::create_directories(opts.out_dir);
    std::vector<MetricsSeries> all;
    std::vector<std::string> outputs;
    SimResult last_result;
    for (const std::string& name : names) {
        SimConfig cfg = base;
        if (name == "ccabc") cfg.protocol = Protocol::ccabc;
        else if (name == "leach") cfg.protocol = Protocol::leach;
        else throw ConfigError("compare: unknown protocol \"" + name + "\"");
        SimResult result = run_simulation(cfg);
        const std::string csv_path = opts.out_dir + "/metrics_" + name + ".csv";
        write_text_file(csv_path, metrics_to_csv(result.metrics));
        outputs.push_back(csv_path);
        const std::string ev_path = opts.out_dir + "/events_" + name + ".jsonl";
        write_text_file(ev_path, events_to_jsonl(result.events));
        outputs.push_back(ev_path);
        all.push_back(result.metrics);
        last_result = std::move(result);
        if (!opts.quiet) {
            std::cout << name << ": first death "
                      << (all.back().first_death_round ? std::to_string(*all.back().first_death_round)
                                                       : std::string("none"))
                      << "\n";
        }
    }
    for (const std::string& p : render_plots(all, opts.out_dir)) outputs.push_back(p);

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_text_file(opts.out_dir + "/manifest.json",
                    manifest_to_json(make_manifest(base, last_result, outputs, secs)));
    return 0;
}

void apply_param(SimConfig& cfg, const std::string& key, const std::string& value) {
    // sweepable scalar knobs
    auto as_int = [&] { return std::stoi(value); };
    auto as_double = [&] { return std::stod(value); };
    if (key == "theta") cfg.rules.theta = as_int();
    else if (key == "k") cfg.k = as_int();
    else if (key == "seed_count") cfg.seed_count = as_int();
    else if (key == "rounds_max") cfg.rounds_max = as_int();
    else if (key == "transmissions_per_round") cfg.transmissions_per_round = as_int();
    else if (key == "sensing_radius") cfg.sensing_radius = as_double();
    else if (key == "rotation_period") cfg.rotation_period = as_int();
    else if (key == "r_max") cfg.r_max = as_double();
    else if (key == "leach.p") cfg.leach.p = as_double();
    else if (key == "aggregation.c") cfg.agg.c = as_double();
    else if (key == "aggregation.sigma") {
        cfg.agg.sigma = as_double();
        cfg.sigma_explicit = true;
    } else throw ConfigError("sweep: unsupported --param \"" + key + "\"");
    validate_config(cfg);
}

int cmd_sweep(const CommonOpts& opts, const std::string& key, const std::vector<std::string>& values) {
    const auto t0 = std::chrono::steady_clock::now();
    SimConfig base = load_with_overrides(opts);
    fs::create_directories(opts.out_dir);

    std::vector<MetricsSeries> all;
    std::vector<std::string> outputs;
    SimResult last_result;
    for (const std::string& v : values) {
        SimConfig cfg = base;
        apply_param(cfg, key, v);
        // derived stream per sweep point so points stay independent
        cfg.rng_seed = base.rng_seed ^ fnv1a64(v.data(), v.size()) ^ fnv1a64(key.data(), key.size());
        SimResult result = run_simulation(cfg);
        result.metrics.protocol += " " + key + "=" + v;
        const std::string csv_path = opts.out_dir + "/sweep_" + key + "=" + v + ".csv";
        write_text_file(csv_path, metrics_to_csv(result.metrics));
        outputs.push_back(csv_path);
        all.push_back(result.metrics);
        last_result = std::move(result);
        if (!opts.quiet) {
            std::cout << key << "=" << v << ": first death "
                      << (all.back().first_death_round ? std::to_string(*all.back().first_death_round)
                                                       : std::string("none"))
                      << "\n";
        }
    }
    for (const std::string& p : render_plots(all, opts.out_dir)) outputs.push_back(p);

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_text_file(opts.out_dir + "/manifest.json",
                    manifest_to_json(make_manifest(base, last_result, outputs, secs)));
    return 0;
}

int cmd_plot(const std::vector<std::string>& csvs, const std::string& out_dir, bool quiet) {
    std::vector<MetricsSeries> all;
    for (const std::string& path : csvs) {
        std::string name = fs::path(path).stem().string();
        all.push_back(parse_metrics_csv(read_text_file(path), name));
    }
    fs::create_directories(out_dir);
    const auto paths = render_plots(all, out_dir);
    if (!quiet)
        for (const auto& p : paths) std::cout << p << "\n";
    return 0;
}

int cmd_dump_grid(const CommonOpts& opts, int steps, const std::string& out_file) {
    SimConfig cfg = load_with_overrides(opts);
    Network net = deploy(cfg.width, cfg.height, cfg.bs, cfg.energy.initial, cfg.sensing_radius);
    const int seed_count = cfg.seed_count ? *cfg.seed_count : default_seed_count(cfg);
    const auto seeds = select_seed_positions(net, seed_count, Rng(cfg.rng_seed).fork(1).next_u64());

    SeedSpec spec;
    spec.mode = SeedMode::seeded_nuclei;
    for (const Vec2& s : seeds)
        spec.positions.emplace_back(static_cast<int>(std::lround(s.x)),
                                    static_cast<int>(std::lround(s.y)));
    Grid grid = new_grid(cfg.width, cfg.height, cfg.k, spec);
    for (int i = 0; i < steps; ++i) grid = step(grid, cfg.rules);

    const std::string text = dump_grid(grid);
    if (out_file.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_file, text);
        if (!opts.quiet) std::cout << "wrote " << out_file << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CCABC sensor-network clustering simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::uint64_t seed_value = 0;

    auto add_common = [&](CLI::App* sub, bool needs_config = true) {
        if (needs_config) sub->add_option("config", opts.config_path, "run config (JSON)")->required();
        sub->add_option("--seed", seed_value, "override rng_seed")
            ->each([&](const std::string&) { opts.seed = seed_value; });
        sub->add_option("--out-dir", opts.out_dir, "output directory");
        sub->add_flag("--quiet", opts.quiet, "suppress progress output");
    };

    auto* run_cmd = app.add_subcommand("run", "run one simulation");
    bool dump_nodes = false;
    add_common(run_cmd);
    run_cmd->add_flag("--dump-nodes", dump_nodes, "also write the node table CSV");

    auto* compare_cmd = app.add_subcommand("compare", "run several protocols on one config");
    std::string protocols = "ccabc,leach";
    add_common(compare_cmd);
    compare_cmd->add_option("--protocols", protocols, "comma-separated protocol list");

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one config knob");
    std::string sweep_key;
    std::vector<std::string> sweep_values;
    add_common(sweep_cmd);
    sweep_cmd->add_option("--param", sweep_key, "config key to vary")->required();
    sweep_cmd->add_option("--values", sweep_values, "values to sweep")->required()->expected(-1);

    auto* plot_cmd = app.add_subcommand("plot", "render charts from metrics CSVs");
    std::vector<std::string> plot_csvs;
    plot_cmd->add_option("csv", plot_csvs, "metrics CSV files")->required()->expected(-1);
    plot_cmd->add_option("--out-dir", opts.out_dir, "output directory");
    plot_cmd->add_flag("--quiet", opts.quiet, "suppress progress output");

    auto* dump_cmd = app.add_subcommand("dump-grid", "text dump of the CA lattice");
    int dump_steps = 0;
    std::string dump_out;
    add_common(dump_cmd);
    dump_cmd->add_option("--steps", dump_steps, "CA steps to run")->required();
    dump_cmd->add_option("--out", dump_out, "write to file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(opts, dump_nodes);
        if (compare_cmd->parsed()) return cmd_compare(opts, protocols);
        if (sweep_cmd->parsed()) return cmd_sweep(opts, sweep_key, sweep_values);
        if (plot_cmd->parsed()) return cmd_plot(plot_csvs, opts.out_dir, opts.quiet);
        if (dump_cmd->parsed()) return cmd_dump_grid(opts, dump_steps, dump_out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
