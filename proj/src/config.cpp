#include "revealnet/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "revealnet/errors.hpp"
#include "revealnet/rng.hpp"

namespace revealnet {

namespace {

using nlohmann::json;

constexpr std::uint64_t kWanTag = 0x77616e00;
constexpr std::uint64_t kMatrixTag = 0x6d617400;
constexpr std::uint64_t kSynthTag = 0x73796e00;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!known.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key))
        return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

SynthParams parse_synth(const json& obj, bool& seed_explicit) {
    reject_unknown_keys(obj,
                        {"flows", "malicious_ratio", "duration_s", "pkt_count_min",
                         "pkt_count_max", "arrival", "distinct_counts", "seed"},
                        "synthetic");
    SynthParams p;
    p.flow_count = get_or<std::uint64_t>(obj, "flows", p.flow_count);
    p.malicious_ratio = get_or<double>(obj, "malicious_ratio", p.malicious_ratio);
    p.duration_s = get_or<double>(obj, "duration_s", p.duration_s);
    p.pkt_count_min = get_or<std::uint32_t>(obj, "pkt_count_min", p.pkt_count_min);
    p.pkt_count_max = get_or<std::uint32_t>(obj, "pkt_count_max", p.pkt_count_max);
    const auto arrival = get_or<std::string>(obj, "arrival", "poisson");
    if (arrival == "poisson")
        p.arrival = SynthParams::Arrival::poisson;
    else if (arrival == "uniform")
        p.arrival = SynthParams::Arrival::uniform;
    else
        throw ConfigError("synthetic.arrival must be poisson or uniform");
    p.distinct_counts = get_or<bool>(obj, "distinct_counts", p.distinct_counts);
    seed_explicit = obj.contains("seed");
    if (seed_explicit)
        p.seed = obj.at("seed").get<std::uint64_t>();
    return p;
}

} // namespace

std::uint64_t ExperimentConfig::effective_wan_seed() const {
    return wan_seed_explicit ? wan.seed : stream_seed(seed, kWanTag);
}

std::uint64_t ExperimentConfig::effective_matrix_seed() const {
    return sketch_seed ? *sketch_seed : stream_seed(seed, kMatrixTag);
}

std::uint64_t ExperimentConfig::effective_synth_seed() const {
    if (!synthetic)
        return 0;
    return synth_seed_explicit ? synthetic->seed : stream_seed(seed, kSynthTag);
}

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object())
        throw ConfigError("config root must be an object");
    reject_unknown_keys(root,
                        {"seed", "trace", "synthetic", "format", "wan", "loss_sweep", "topology",
                         "sketch", "tam", "representations", "heuristics", "metric", "switch",
                         "eta", "parallel", "transcript", "out_dir", "tables"},
                        "config");
    if (!root.contains("seed"))
        throw ConfigError("config requires an explicit seed");

    ExperimentConfig cfg;
    cfg.seed = get_or<std::uint64_t>(root, "seed", 1);

    if (root.contains("trace")) {
        const auto& t = root.at("trace");
        reject_unknown_keys(t, {"path"}, "trace");
        cfg.trace_path = t.at("path").get<std::string>();
    }
    if (root.contains("synthetic"))
        cfg.synthetic = parse_synth(root.at("synthetic"), cfg.synth_seed_explicit);
    if (cfg.trace_path && cfg.synthetic)
        throw ConfigError("give either trace.path or synthetic, not both");

    if (root.contains("format")) {
        const auto& f = root.at("format");
        reject_unknown_keys(f, {"columns", "label_aliases"}, "format");
        if (f.contains("columns")) {
            const auto& c = f.at("columns");
            cfg.format.col_src_ip = get_or<std::string>(c, "src_ip", cfg.format.col_src_ip);
            cfg.format.col_dst_ip = get_or<std::string>(c, "dst_ip", cfg.format.col_dst_ip);
            cfg.format.col_src_port = get_or<std::string>(c, "src_port", cfg.format.col_src_port);
            cfg.format.col_dst_port = get_or<std::string>(c, "dst_port", cfg.format.col_dst_port);
            cfg.format.col_proto = get_or<std::string>(c, "proto", cfg.format.col_proto);
            cfg.format.col_ts_us = get_or<std::string>(c, "ts_us", cfg.format.col_ts_us);
            cfg.format.col_label = get_or<std::string>(c, "label", cfg.format.col_label);
        }
        if (f.contains("label_aliases")) {
            for (const auto& [name, target] : f.at("label_aliases").items()) {
                const auto t = target.get<std::string>();
                if (t != "benign" && t != "malicious")
                    throw ConfigError("label alias target must be benign or malicious");
                cfg.format.label_aliases[name] =
                    t == "benign" ? Label::benign : Label::malicious;
            }
        }
    }

    if (root.contains("wan")) {
        const auto& w = root.at("wan");
        reject_unknown_keys(w, {"base_latency_us", "jitter_stddev_us", "loss_rate", "seed"}, "wan");
        cfg.wan.base_latency_us = get_or<std::int64_t>(w, "base_latency_us", cfg.wan.base_latency_us);
        cfg.wan.jitter_stddev_us =
            get_or<std::int64_t>(w, "jitter_stddev_us", cfg.wan.jitter_stddev_us);
        cfg.wan.loss_rate = get_or<double>(w, "loss_rate", cfg.wan.loss_rate);
        if (w.contains("seed")) {
            cfg.wan.seed = w.at("seed").get<std::uint64_t>();
            cfg.wan_seed_explicit = true;
        }
        if (cfg.wan.base_latency_us < 0 || cfg.wan.jitter_stddev_us < 0 ||
            cfg.wan.loss_rate < 0.0 || cfg.wan.loss_rate > 1.0)
            throw ConfigError("wan parameters out of range");
    }
    cfg.loss_sweep = get_or<std::vector<double>>(root, "loss_sweep", {});
    for (double l : cfg.loss_sweep)
        if (l < 0.0 || l > 1.0)
            throw ConfigError("loss_sweep values must be within [0, 1]");

    if (root.contains("topology")) {
        const auto& t = root.at("topology");
        reject_unknown_keys(t, {"k_coop"}, "topology");
        cfg.k_coop = get_or<int>(t, "k_coop", cfg.k_coop);
        if (cfg.k_coop < 1)
            throw ConfigError("topology.k_coop must be >= 1");
    }

    if (root.contains("sketch")) {
        const auto& s = root.at("sketch");
        reject_unknown_keys(s, {"m", "scale", "seed"}, "sketch");
        cfg.m = get_or<std::uint64_t>(s, "m", cfg.m);
        cfg.scale = get_or<std::int32_t>(s, "scale", cfg.scale);
        if (s.contains("seed"))
            cfg.sketch_seed = s.at("seed").get<std::uint64_t>();
        if (cfg.m < 1 || cfg.scale < 1)
            throw ConfigError("sketch.m and sketch.scale must be >= 1");
    }

    if (root.contains("tam")) {
        const auto& t = root.at("tam");
        reject_unknown_keys(t, {"bin_widths_s", "n_override"}, "tam");
        cfg.bin_widths_s = get_or<std::vector<double>>(t, "bin_widths_s", cfg.bin_widths_s);
        if (t.contains("n_override"))
            cfg.n_override = t.at("n_override").get<std::uint64_t>();
    }
    if (cfg.bin_widths_s.empty())
        throw ConfigError("tam.bin_widths_s must not be empty");
    for (double w : cfg.bin_widths_s)
        if (w <= 0)
            throw ConfigError("tam bin widths must be positive");

    if (root.contains("representations")) {
        cfg.representations.clear();
        for (const auto& r : root.at("representations"))
            cfg.representations.push_back(representation_from_name(r.get<std::string>()));
        if (cfg.representations.empty())
            throw ConfigError("representations must not be empty");
    }

    if (root.contains("heuristics")) {
        const auto& h = root.at("heuristics");
        reject_unknown_keys(h, {"mode", "time_window_s", "volume_tolerance"}, "heuristics");
        cfg.heuristics.enabled =
            heuristic_mode_from_name(get_or<std::string>(h, "mode", "both"));
        cfg.heuristics.time_window_us = static_cast<std::int64_t>(
            get_or<double>(h, "time_window_s", 2.5) * 1e6);
        cfg.heuristics.volume_tolerance = get_or<double>(h, "volume_tolerance", 0.05);
        if (cfg.heuristics.time_window_us < 0 || cfg.heuristics.volume_tolerance < 0)
            throw ConfigError("heuristic parameters out of range");
    }

    if (root.contains("metric")) {
        const auto& m = root.at("metric");
        reject_unknown_keys(m, {"mode", "cosine_threshold", "hamming_max_distance"}, "metric");
        const auto mode = get_or<std::string>(m, "mode", "exact");
        if (mode == "exact")
            cfg.metric_mode = MetricMode::exact;
        else if (mode == "relaxed")
            cfg.metric_mode = MetricMode::relaxed;
        else
            throw ConfigError("metric.mode must be exact or relaxed");
        cfg.cosine_threshold = get_or<double>(m, "cosine_threshold", cfg.cosine_threshold);
        cfg.hamming_max_distance =
            get_or<std::size_t>(m, "hamming_max_distance", cfg.hamming_max_distance);
    }

    if (root.contains("switch")) {
        const auto& s = root.at("switch");
        reject_unknown_keys(s, {"capacity", "install_delay_us", "record_trigger_packet"},
                            "switch");
        cfg.capacity = get_or<std::size_t>(s, "capacity", cfg.capacity);
        cfg.install_delay_us = get_or<std::int64_t>(s, "install_delay_us", cfg.install_delay_us);
        cfg.record_trigger_packet =
            get_or<bool>(s, "record_trigger_packet", cfg.record_trigger_packet);
        if (cfg.capacity < 1 || cfg.install_delay_us < 0)
            throw ConfigError("switch parameters out of range");
    }

    cfg.eta = get_or<double>(root, "eta", cfg.eta);
    cfg.parallel = get_or<bool>(root, "parallel", cfg.parallel);
    cfg.transcript = get_or<bool>(root, "transcript", cfg.transcript);
    cfg.out_dir = get_or<std::string>(root, "out_dir", cfg.out_dir);

    if (root.contains("tables")) {
        const auto& t = root.at("tables");
        reject_unknown_keys(t,
                            {"f_total", "f_m", "k_coop", "m", "tam_n_bandwidth", "memory_bytes",
                             "span_s", "bin_widths_s"},
                            "tables");
        cfg.tables.f_total = get_or<std::uint64_t>(t, "f_total", cfg.tables.f_total);
        cfg.tables.f_m = get_or<std::uint64_t>(t, "f_m", cfg.tables.f_m);
        cfg.tables.k_coop = get_or<std::uint64_t>(t, "k_coop", cfg.tables.k_coop);
        cfg.tables.m = get_or<std::uint64_t>(t, "m", cfg.tables.m);
        cfg.tables.tam_n_bandwidth =
            get_or<std::uint64_t>(t, "tam_n_bandwidth", cfg.tables.tam_n_bandwidth);
        cfg.tables.memory_bytes = get_or<std::uint64_t>(t, "memory_bytes", cfg.tables.memory_bytes);
        cfg.tables.span_s = get_or<double>(t, "span_s", cfg.tables.span_s);
        cfg.tables.bin_widths_s =
            get_or<std::vector<double>>(t, "bin_widths_s", cfg.tables.bin_widths_s);
    }

    if (!cfg.trace_path && !cfg.synthetic)
        throw ConfigError("config needs a trace path or synthetic generator parameters");
    cfg.raw_json = text;
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

} // namespace revealnet
