#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "revealnet/correlation.hpp"
#include "revealnet/flow.hpp"
#include "revealnet/tam.hpp"

namespace revealnet {

struct SwitchConfig {
    std::size_t capacity = 1u << 20;
    std::int64_t install_delay_us = 0;
    Representation representation = Representation::coskun_int;
    TamConfig tam;
    std::shared_ptr<const ProjectionMatrix> matrix; // shared read-only; unused for tam
    /// When set, the cloned first packet is written back into the feature
    /// vector after rule installation instead of being discarded.
    bool record_trigger_packet = false;
};

struct ExportedVector {
    FeatureVector vec;
    std::uint64_t created_ts48 = 0;
    std::uint32_t pkt_count32 = 0;
};

/// One RevealNet-enabled switch: flow table with control-plane rule
/// installation semantics, LRU-bounded feature table, per-flow metadata
/// (48-bit creation timestamp, 32-bit packet count), and the local
/// heuristic-pruned correlation engine.
///
/// A flow's first packet only triggers rule installation; it and any packets
/// arriving before installation completes (pkt.ts + install_delay) are not
/// recorded. The first recorded packet sets the TAM anchor and created_ts48.
/// Each instance is single-writer; distinct instances share nothing mutable.
class SwitchNode {
public:
    SwitchNode(int id, SwitchConfig cfg);

    int id() const { return id_; }
    const SwitchConfig& config() const { return cfg_; }

    void process_packet(const PacketRecord& pkt);

    /// entries occupying a feature-table row (installed rules, recorded or not)
    std::size_t tracked_count() const { return entries_.size(); }
    /// entries with at least one recorded packet; these form the candidate set
    std::size_t active_count() const { return time_index_.size(); }

    bool is_tracked(const FlowKey& key) const { return entries_.count(key) != 0; }

    /// Representation payload plus metadata for one tracked flow; throws
    /// NotTracked for unknown, evicted, or never-recorded flows.
    ExportedVector export_vector(const FlowKey& key) const;

    /// Heuristic-pruned local correlation. The creation-time filter locates
    /// the window via the sorted-by-created_ts48 index (log F), honoring
    /// 48-bit wraparound; the count filter then scans that window; the metric
    /// runs on what is left. Counters record each stage's cardinality.
    MatchReport local_correlate(const CorrelationDirective& directive) const;

private:
    struct Entry {
        FlowKey key;
        std::uint32_t row = 0;
        IntSketch sketch;  // sketch representations
        TamVector tam;     // tam representation
        std::int64_t install_done_us = 0;
        bool active = false;
        std::int64_t anchor_us = 0;
        std::uint64_t created_ts48 = 0;
        std::uint32_t pkt_count32 = 0;
        std::uint64_t lru_stamp = 0;
    };

    void record(Entry& entry, std::int64_t ts_us);
    void touch_lru(Entry& entry);
    void evict_lru();
    void drop_time_index(const Entry& entry);
    bool metric_match(const Entry& entry, const CorrelationDirective& d, double& score) const;

    int id_;
    SwitchConfig cfg_;
    std::unordered_map<FlowKey, Entry, FlowKeyHash> entries_;
    std::map<std::uint64_t, FlowKey> lru_index_;            // stamp -> key, strict LRU
    std::multimap<std::uint64_t, FlowKey> time_index_;      // created_ts48 -> key
    std::vector<std::uint32_t> free_rows_;
    std::uint32_t next_row_ = 0;
    std::uint64_t lru_counter_ = 0;
};

} // namespace revealnet
