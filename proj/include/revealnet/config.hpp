#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "revealnet/correlation.hpp"
#include "revealnet/synth.hpp"
#include "revealnet/trace.hpp"
#include "revealnet/wan.hpp"

namespace revealnet {

inline constexpr const char* kVersion = "0.1.0";

enum class MetricMode { exact, relaxed };

/// Closed-form table parameters (storage and bandwidth reports). Defaults
/// mirror the 19+1 bitcoinminer deployment the published figures use.
struct TableParams {
    std::uint64_t f_total = 119'339;
    std::uint64_t f_m = 202;
    std::uint64_t k_coop = 19;
    std::uint64_t m = 10;
    std::uint64_t tam_n_bandwidth = 60; // TAM length behind the published bandwidth row
    std::uint64_t memory_bytes = 256'000'000;
    double span_s = 61.01;
    std::vector<double> bin_widths_s = {0.1, 0.5, 1.0};
};

struct ExperimentConfig {
    std::uint64_t seed = 1;

    // exactly one of these provides packets
    std::optional<std::string> trace_path;
    std::optional<SynthParams> synthetic;
    bool synth_seed_explicit = false;
    TraceFormat format;

    WanModel wan; // seed filled from master unless given
    bool wan_seed_explicit = false;
    std::vector<double> loss_sweep; // empty -> single point at wan.loss_rate

    int k_coop = 19;
    std::vector<Representation> representations = {Representation::coskun_int};
    std::vector<double> bin_widths_s = {0.1};
    std::optional<std::uint64_t> n_override;
    std::uint64_t m = 10;
    std::int32_t scale = kDefaultGaussianScale;
    std::optional<std::uint64_t> sketch_seed;

    HeuristicParams heuristics;
    MetricMode metric_mode = MetricMode::exact;
    double cosine_threshold = 0.9;
    std::size_t hamming_max_distance = 0;

    std::size_t capacity = 1u << 20;
    std::int64_t install_delay_us = 0;
    bool record_trigger_packet = false;

    double eta = 1.0;
    bool parallel = true;
    bool transcript = false;
    std::string out_dir = "out";

    TableParams tables;

    std::string raw_json; // verbatim config text, echoed into the manifest

    /// seeds derived from the master seed where not explicitly configured
    std::uint64_t effective_wan_seed() const;
    std::uint64_t effective_matrix_seed() const;
    std::uint64_t effective_synth_seed() const;
};

/// Parses and validates the JSON config file. Unknown top-level keys are
/// rejected to catch typos. Throws ConfigError.
ExperimentConfig load_config(const std::string& path);

/// In-memory variant used by tests.
ExperimentConfig parse_config(const std::string& json_text);

} // namespace revealnet
