#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "revealnet/flow.hpp"
#include "revealnet/sketch.hpp"

namespace revealnet {

/// Per-flow feature representation held in a switch's feature table.
enum class Representation : std::uint8_t { tam = 0, coskun_int = 1, coskun_bin = 2, nasr_int = 3 };

const char* representation_name(Representation r);
Representation representation_from_name(const std::string& name);

/// Matrix family used by a representation; tam has none.
MatrixKind matrix_kind_for(Representation r);

enum class HeuristicMode : std::uint8_t { none = 0, time = 1, count = 2, both = 3 };

const char* heuristic_mode_name(HeuristicMode m);
HeuristicMode heuristic_mode_from_name(const std::string& name);

/// Candidate pruning knobs: creation-time window half-width and packet-count
/// tolerance fraction.
struct HeuristicParams {
    std::int64_t time_window_us = 2'500'000;
    double volume_tolerance = 0.05;
    HeuristicMode enabled = HeuristicMode::both;

    bool time_enabled() const {
        return enabled == HeuristicMode::time || enabled == HeuristicMode::both;
    }
    bool count_enabled() const {
        return enabled == HeuristicMode::count || enabled == HeuristicMode::both;
    }
};

enum class MetricKind : std::uint8_t {
    hamming_exact = 0,   // distance 0
    cosine_exact = 1,    // cos == 1 in exact arithmetic
    hamming_threshold = 2,
    cosine_threshold = 3,
};

struct MetricSpec {
    MetricKind kind = MetricKind::hamming_exact;
    std::size_t max_distance = 0; // hamming_threshold
    double min_score = 1.0;       // cosine_threshold
};

const char* metric_kind_name(MetricKind k);

/// The metric each scheme's authors used: hamming for TAM and Coskun-style
/// sketches, cosine for the compressive sketch.
MetricSpec default_metric(Representation r);

/// Exported per-flow payload. Only the field matching `rep` is populated.
struct FeatureVector {
    Representation rep = Representation::coskun_int;
    IntSketch sketch; // coskun_int / nasr_int
    BinSketch bits;   // coskun_bin
    TamVector tam;    // tam

    /// ledger charge in bits: m for binary sketches, 32m for integer
    /// sketches, 32n for TAMs
    std::uint64_t payload_bits() const;
};

inline constexpr std::uint64_t kTs48Mask = (1ull << 48) - 1;
inline constexpr std::uint64_t kMetadataBits = 48 + 32; // creation ts + packet count

/// What the manager fans out to every cooperating switch: the attacking
/// flow's vector plus its start time and volume. Byte-identical across
/// recipients.
struct CorrelationDirective {
    FeatureVector attack_vector;
    std::uint64_t attack_created_ts48 = 0;
    std::uint32_t attack_pkt_count32 = 0;
    Representation representation = Representation::coskun_int;
    HeuristicParams heuristics;
    MetricSpec metric;

    std::uint64_t wire_bits() const { return attack_vector.payload_bits() + kMetadataBits; }
};

/// Cardinalities of each pruning stage of one local correlation.
struct ComparisonCounter {
    std::uint64_t candidates_scanned = 0;
    std::uint64_t time_filtered = 0;
    std::uint64_t count_filtered = 0;
    std::uint64_t vector_comparisons = 0;

    ComparisonCounter& operator+=(const ComparisonCounter& o) {
        candidates_scanned += o.candidates_scanned;
        time_filtered += o.time_filtered;
        count_filtered += o.count_filtered;
        vector_comparisons += o.vector_comparisons;
        return *this;
    }
};

/// One switch's reply: matched 5-tuples (charged 192 bits each on the wire)
/// with per-match scores for the relaxed mode, plus stage counters.
struct MatchReport {
    int switch_id = 0;
    std::vector<FlowKey> matched_keys;
    std::vector<double> match_scores; // parallel to matched_keys; 1.0 for exact matches
    ComparisonCounter counter;

    std::uint64_t wire_bits() const { return matched_keys.size() * kFlowKeyWireBits; }
};

} // namespace revealnet
