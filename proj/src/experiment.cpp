#include "revealnet/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "revealnet/errors.hpp"
#include "revealnet/orchestrator.hpp"
#include "revealnet/report.hpp"
#include "revealnet/synth.hpp"
#include "revealnet/trace.hpp"

namespace revealnet {

namespace fs = std::filesystem;

namespace {

ExperimentConfig load_with_overrides(const std::string& path, const CliOverrides& ov) {
    ExperimentConfig cfg = load_config(path);
    if (ov.seed)
        cfg.seed = *ov.seed; // derived sub-seeds re-derive from the new master
    if (ov.out_dir)
        cfg.out_dir = *ov.out_dir;
    return cfg;
}

std::vector<PacketRecord> acquire_records(const ExperimentConfig& cfg) {
    if (cfg.trace_path) {
        std::ifstream in(*cfg.trace_path);
        if (!in)
            throw TraceError("cannot open trace file: " + *cfg.trace_path);
        return parse_trace(in, cfg.format);
    }
    SynthParams params = *cfg.synthetic;
    params.seed = cfg.effective_synth_seed();
    return generate_synthetic(params);
}

std::int64_t trace_span_us(const FlowMap& flows) {
    std::int64_t lo = 0, hi = 0;
    bool any = false;
    for (const auto& [key, trace] : flows) {
        if (!any) {
            lo = trace.packets_us.front();
            hi = trace.packets_us.back();
            any = true;
        } else {
            lo = std::min(lo, trace.packets_us.front());
            hi = std::max(hi, trace.packets_us.back());
        }
    }
    return any ? hi - lo : 0;
}

MetricSpec resolve_metric(const ExperimentConfig& cfg, Representation rep) {
    if (cfg.metric_mode == MetricMode::exact)
        return default_metric(rep);
    MetricSpec spec;
    if (rep == Representation::coskun_bin) {
        spec.kind = MetricKind::hamming_threshold;
        spec.max_distance = cfg.hamming_max_distance;
    } else {
        spec.kind = MetricKind::cosine_threshold;
        spec.min_score = cfg.cosine_threshold;
    }
    return spec;
}

std::string grid_label(Representation rep, double bin_s, double loss) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s t=%.6g loss=%.6g", representation_name(rep), bin_s,
                  loss);
    return buf;
}

int run_experiment(const ExperimentConfig& cfg) {
    std::vector<PacketRecord> records;
    FlowMap flows;
    try {
        records = acquire_records(cfg);
        flows = group_flows(records);
    } catch (const TraceError& e) {
        std::cerr << "trace error: " << e.what() << '\n';
        return kExitTrace;
    } catch (const MalformedRow& e) {
        std::cerr << "trace error: " << e.what() << '\n';
        return kExitTrace;
    } catch (const LabelConflict& e) {
        std::cerr << "trace error: " << e.what() << '\n';
        return kExitTrace;
    }
    if (flows.empty()) {
        std::cerr << "trace error: no flows in input\n";
        return kExitTrace;
    }

    const std::int64_t span_us = trace_span_us(flows);
    std::set<FlowKey> malicious;
    for (const auto& [key, trace] : flows)
        if (trace.label == Label::malicious)
            malicious.insert(key);

    const Topology topology = partition(flows, cfg.k_coop);
    std::vector<double> losses = cfg.loss_sweep;
    if (losses.empty())
        losses.push_back(cfg.wan.loss_rate);

    fs::create_directories(cfg.out_dir);
    std::ofstream transcript;
    if (cfg.transcript) {
        transcript.open(fs::path(cfg.out_dir) / "transcript.jsonl");
        if (!transcript)
            throw Error("cannot write transcript");
    }

    std::vector<ScoreRow> score_rows;
    std::vector<ComparisonRow> comparison_rows;
    std::vector<StorageRow> storage_rows;
    std::vector<std::string> grid_points;

    // one matrix per family; entry (i,j) depends on (seed,i,j) only, so a
    // single wide matrix covers every n in the grid
    std::map<std::pair<MatrixKind, std::uint64_t>, std::shared_ptr<const ProjectionMatrix>>
        matrix_cache;

    for (Representation rep : cfg.representations) {
        for (double bin_s : cfg.bin_widths_s) {
            const auto bin_us = static_cast<std::int64_t>(std::llround(bin_s * 1e6));
            if (bin_us <= 0)
                throw ConfigError("bin width too small");
            std::uint64_t n = cfg.n_override
                                  ? *cfg.n_override
                                  : std::max<std::uint64_t>(
                                        1, static_cast<std::uint64_t>(
                                               (span_us + bin_us - 1) / bin_us));
            const TamConfig tam_cfg = TamConfig::from_bins(bin_us, n);

            SwitchConfig switch_cfg;
            switch_cfg.capacity = cfg.capacity;
            switch_cfg.install_delay_us = cfg.install_delay_us;
            switch_cfg.representation = rep;
            switch_cfg.tam = tam_cfg;
            switch_cfg.record_trigger_packet = cfg.record_trigger_packet;
            if (rep != Representation::tam) {
                const auto key = std::make_pair(matrix_kind_for(rep), n);
                auto it = matrix_cache.find(key);
                if (it == matrix_cache.end()) {
                    it = matrix_cache
                             .emplace(key, std::make_shared<ProjectionMatrix>(gen_matrix(
                                               key.first, n, cfg.m,
                                               cfg.effective_matrix_seed(), cfg.scale)))
                             .first;
                }
                switch_cfg.matrix = it->second;
            }
            storage_rows.push_back(StorageRow{rep, bin_s, n, cfg.m});

            const MetricSpec metric = resolve_metric(cfg, rep);
            for (double loss : losses) {
                WanModel wan = cfg.wan;
                wan.seed = cfg.effective_wan_seed();
                wan.loss_rate = loss;
                grid_points.push_back(grid_label(rep, bin_s, loss));

                const Deployment deployment(flows, topology, wan, switch_cfg, cfg.parallel);
                static constexpr HeuristicMode kModes[] = {HeuristicMode::none,
                                                           HeuristicMode::time,
                                                           HeuristicMode::count,
                                                           HeuristicMode::both};
                for (HeuristicMode mode : kModes) {
                    HeuristicParams heur = cfg.heuristics;
                    heur.enabled = mode;
                    const bool is_configured = mode == cfg.heuristics.enabled;
                    std::ostream* ts = nullptr;
                    if (is_configured && cfg.transcript) {
                        transcript << "{\"grid_point\":\"" << grid_points.back() << "\"}\n";
                        ts = &transcript;
                    }
                    const RunResult result = deployment.correlate(
                        heur, metric, cfg.eta, malicious, cfg.parallel, ts);

                    ComparisonRow crow;
                    crow.rep = rep;
                    crow.bin_width_s = bin_s;
                    crow.loss_rate = loss;
                    crow.mode = mode;
                    crow.attacking_flows = result.directives_dispatched;
                    for (const auto& c : result.counters_by_switch)
                        crow.totals += c;
                    crow.avg_vector_comparisons =
                        result.directives_dispatched == 0
                            ? 0.0
                            : static_cast<double>(crow.totals.vector_comparisons) /
                                  static_cast<double>(result.directives_dispatched);
                    comparison_rows.push_back(crow);

                    if (is_configured) {
                        ScoreRow row;
                        row.rep = rep;
                        row.bin_width_s = bin_s;
                        row.n = n;
                        row.m = cfg.m;
                        row.loss_rate = loss;
                        row.heuristics = mode;
                        row.metric = metric_kind_name(metric.kind);
                        row.malicious = malicious.size();
                        row.tracked = malicious.size() - result.attack_flows_untracked;
                        std::uint64_t tp = 0, fp = 0;
                        for (auto v : result.scores.tp_by_switch)
                            tp += v;
                        for (auto v : result.scores.fp_by_switch)
                            fp += v;
                        row.tp = tp;
                        row.fp = fp;
                        row.rates_defined = result.scores.rates_defined;
                        row.tpr = result.scores.tpr_rate;
                        row.fpr = result.scores.fpr_rate;
                        for (const auto& fa : result.attribution.flows) {
                            if (fa.chosen)
                                ++row.attributed;
                            if (fa.tie)
                                ++row.ties;
                        }
                        score_rows.push_back(row);
                    }
                }
            }
        }
    }

    auto open_out = [&](const char* name) {
        std::ofstream out(fs::path(cfg.out_dir) / name);
        if (!out)
            throw Error(std::string("cannot write ") + name);
        return out;
    };
    {
        auto out = open_out("scores.csv");
        write_scores_csv(out, score_rows);
    }
    {
        auto out = open_out("comparisons.csv");
        write_comparisons_csv(out, comparison_rows);
    }
    {
        auto out = open_out("storage.csv");
        write_storage_csv(out, storage_rows, cfg.tables.memory_bytes, flows.size());
    }
    {
        auto out = open_out("bandwidth.csv");
        TableParams params = cfg.tables;
        write_bandwidth_csv(out, params);
    }
    {
        auto out = open_out("manifest.json");
        const std::vector<std::string> outputs = {"scores.csv", "comparisons.csv", "storage.csv",
                                                  "bandwidth.csv"};
        write_manifest(out, cfg, outputs, grid_points);
    }
    return kExitOk;
}

} // namespace

int cmd_run(const std::string& config_path, const CliOverrides& overrides) {
    ExperimentConfig cfg;
    try {
        cfg = load_with_overrides(config_path, overrides);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        return run_experiment(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

int cmd_gen(const std::string& config_path, const CliOverrides& overrides) {
    ExperimentConfig cfg;
    try {
        cfg = load_with_overrides(config_path, overrides);
        if (!cfg.synthetic)
            throw ConfigError("gen requires synthetic generator parameters");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        SynthParams params = *cfg.synthetic;
        params.seed = cfg.effective_synth_seed();
        const auto records = generate_synthetic(params);
        fs::create_directories(cfg.out_dir);
        const auto path = fs::path(cfg.out_dir) / "synthetic_trace.csv";
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error("cannot write " + path.string());
        serialize_trace(out, records);
        std::cout << path.string() << '\n';
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

int cmd_tables(const std::optional<std::string>& config_path, const CliOverrides& overrides) {
    TableParams params;
    std::string out_dir = "out";
    try {
        if (config_path) {
            ExperimentConfig cfg = load_config(*config_path);
            params = cfg.tables;
            out_dir = cfg.out_dir;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (overrides.out_dir)
        out_dir = *overrides.out_dir;
    try {
        fs::create_directories(out_dir);
        {
            std::ofstream out(fs::path(out_dir) / "bandwidth.csv");
            if (!out)
                throw Error("cannot write bandwidth.csv");
            write_bandwidth_csv(out, params);
        }
        {
            std::vector<StorageRow> rows;
            for (Representation rep :
                 {Representation::coskun_bin, Representation::coskun_int, Representation::nasr_int,
                  Representation::tam}) {
                for (double t : params.bin_widths_s) {
                    const auto n = static_cast<std::uint64_t>(std::ceil(params.span_s / t));
                    rows.push_back(StorageRow{rep, t, std::max<std::uint64_t>(1, n), params.m});
                }
            }
            std::ofstream out(fs::path(out_dir) / "storage.csv");
            if (!out)
                throw Error("cannot write storage.csv");
            write_storage_csv(out, rows, params.memory_bytes, params.f_total);
        }
        std::cout << out_dir << "/bandwidth.csv " << out_dir << "/storage.csv\n";
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

} // namespace revealnet
