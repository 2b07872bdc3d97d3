#include "revealnet/switch_node.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "revealnet/errors.hpp"

namespace revealnet {

namespace {

bool needs_matrix(Representation r) {
    return r != Representation::tam;
}

bool is_zero(const IntSketch& s) {
    return std::all_of(s.values.begin(), s.values.end(), [](std::int64_t v) { return v == 0; });
}

bool is_zero(const TamVector& t) {
    return std::all_of(t.counts.begin(), t.counts.end(), [](std::uint32_t v) { return v == 0; });
}

} // namespace

SwitchNode::SwitchNode(int id, SwitchConfig cfg) : id_(id), cfg_(std::move(cfg)) {
    if (cfg_.capacity < 1)
        throw ConfigError("switch capacity must be >= 1");
    if (cfg_.install_delay_us < 0)
        throw ConfigError("install delay must be >= 0");
    if (needs_matrix(cfg_.representation)) {
        if (!cfg_.matrix)
            throw ConfigError("sketch representations need a projection matrix");
        if (cfg_.matrix->n != cfg_.tam.n)
            throw DimensionMismatch("projection matrix width does not match TAM length");
    }
}

void SwitchNode::process_packet(const PacketRecord& pkt) {
    auto it = entries_.find(pkt.key);
    if (it == entries_.end()) {
        // new flow: clone to control plane, install rule, allocate a row
        if (entries_.size() >= cfg_.capacity)
            evict_lru();
        Entry entry;
        entry.key = pkt.key;
        if (!free_rows_.empty()) {
            entry.row = free_rows_.back();
            free_rows_.pop_back();
        } else {
            entry.row = next_row_++;
        }
        entry.install_done_us = pkt.ts_us + cfg_.install_delay_us;
        if (cfg_.representation == Representation::tam)
            entry.tam.counts.assign(cfg_.tam.n, 0);
        else
            entry.sketch = zero_sketch(cfg_.matrix->m);
        entry.lru_stamp = ++lru_counter_;
        auto [eit, inserted] = entries_.emplace(pkt.key, std::move(entry));
        lru_index_.emplace(eit->second.lru_stamp, pkt.key);
        if (cfg_.record_trigger_packet)
            record(eit->second, pkt.ts_us);
        return;
    }

    Entry& entry = it->second;
    if (pkt.ts_us < entry.install_done_us)
        return; // queued while the rule installs; never written back
    record(entry, pkt.ts_us);
}

void SwitchNode::record(Entry& entry, std::int64_t ts_us) {
    if (!entry.active) {
        entry.active = true;
        entry.anchor_us = ts_us;
        entry.tam.anchor_us = ts_us;
        entry.created_ts48 = static_cast<std::uint64_t>(ts_us) & kTs48Mask;
        time_index_.emplace(entry.created_ts48, entry.key);
    }
    if (auto bin = tam_bin_index(cfg_.tam, entry.anchor_us, ts_us)) {
        if (cfg_.representation == Representation::tam) {
            if (entry.tam.counts[*bin] < std::numeric_limits<std::uint32_t>::max())
                ++entry.tam.counts[*bin];
        } else {
            sketch_update(entry.sketch, *cfg_.matrix, *bin);
        }
    }
    if (entry.pkt_count32 < std::numeric_limits<std::uint32_t>::max())
        ++entry.pkt_count32;
    touch_lru(entry);
}

void SwitchNode::touch_lru(Entry& entry) {
    lru_index_.erase(entry.lru_stamp);
    entry.lru_stamp = ++lru_counter_;
    lru_index_.emplace(entry.lru_stamp, entry.key);
}

void SwitchNode::evict_lru() {
    auto lru = lru_index_.begin();
    auto eit = entries_.find(lru->second);
    const Entry& entry = eit->second;
    if (entry.active)
        drop_time_index(entry);
    free_rows_.push_back(entry.row);
    lru_index_.erase(lru);
    entries_.erase(eit);
}

void SwitchNode::drop_time_index(const Entry& entry) {
    auto [lo, hi] = time_index_.equal_range(entry.created_ts48);
    for (auto it = lo; it != hi; ++it) {
        if (it->second == entry.key) {
            time_index_.erase(it);
            return;
        }
    }
}

ExportedVector SwitchNode::export_vector(const FlowKey& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end() || !it->second.active)
        throw NotTracked("flow not tracked: " + format_ipv4(key.src_ip) + ":" +
                         std::to_string(key.src_port));
    const Entry& entry = it->second;
    ExportedVector out;
    out.vec.rep = cfg_.representation;
    switch (cfg_.representation) {
    case Representation::tam: out.vec.tam = entry.tam; break;
    case Representation::coskun_bin: out.vec.bits = binarize(entry.sketch); break;
    case Representation::coskun_int:
    case Representation::nasr_int: out.vec.sketch = entry.sketch; break;
    }
    out.created_ts48 = entry.created_ts48;
    out.pkt_count32 = entry.pkt_count32;
    return out;
}

bool SwitchNode::metric_match(const Entry& entry, const CorrelationDirective& d,
                              double& score) const {
    score = 1.0;
    switch (d.metric.kind) {
    case MetricKind::hamming_exact:
    case MetricKind::hamming_threshold: {
        std::size_t dist = 0;
        if (cfg_.representation == Representation::coskun_bin)
            dist = hamming(binarize(entry.sketch), d.attack_vector.bits);
        else if (cfg_.representation == Representation::tam)
            dist = hamming(entry.tam, d.attack_vector.tam);
        else
            dist = hamming(entry.sketch, d.attack_vector.sketch);
        const std::size_t limit =
            d.metric.kind == MetricKind::hamming_exact ? 0 : d.metric.max_distance;
        return dist <= limit;
    }
    case MetricKind::cosine_exact:
    case MetricKind::cosine_threshold: {
        if (cfg_.representation == Representation::coskun_bin)
            throw ConfigError("cosine metrics are undefined for binary sketches");
        const bool use_tam = cfg_.representation == Representation::tam;
        // a zero vector has no direction; it can never cosine-match
        if (use_tam) {
            if (is_zero(entry.tam) || is_zero(d.attack_vector.tam))
                return false;
        } else {
            if (is_zero(entry.sketch) || is_zero(d.attack_vector.sketch))
                return false;
        }
        if (d.metric.kind == MetricKind::cosine_exact)
            return use_tam ? cosine_exact_match(entry.tam, d.attack_vector.tam)
                           : cosine_exact_match(entry.sketch, d.attack_vector.sketch);
        score = use_tam ? cosine_score(entry.tam, d.attack_vector.tam)
                        : cosine_score(entry.sketch, d.attack_vector.sketch);
        return score >= d.metric.min_score;
    }
    }
    return false;
}

MatchReport SwitchNode::local_correlate(const CorrelationDirective& d) const {
    if (d.representation != cfg_.representation)
        throw RepresentationMismatch(
            std::string("directive carries ") + representation_name(d.representation) +
            ", switch stores " + representation_name(cfg_.representation));

    MatchReport report;
    report.switch_id = id_;
    report.counter.candidates_scanned = time_index_.size();

    // stage 1: creation-time window, via the sorted index (binary-search
    // locate), with 48-bit modular wraparound handled as up to two ranges
    std::vector<const Entry*> window;
    if (d.heuristics.time_enabled() &&
        2 * static_cast<std::uint64_t>(d.heuristics.time_window_us) < kTs48Mask) {
        const std::uint64_t w = static_cast<std::uint64_t>(d.heuristics.time_window_us);
        const std::uint64_t lo = (d.attack_created_ts48 - w) & kTs48Mask;
        const std::uint64_t hi = (d.attack_created_ts48 + w) & kTs48Mask;
        auto scan = [&](std::uint64_t from, std::uint64_t to) {
            for (auto it = time_index_.lower_bound(from);
                 it != time_index_.end() && it->first <= to; ++it)
                window.push_back(&entries_.at(it->second));
        };
        if (lo <= hi) {
            scan(lo, hi);
        } else {
            scan(lo, kTs48Mask);
            scan(0, hi);
        }
    } else {
        window.reserve(time_index_.size());
        for (const auto& [ts, key] : time_index_)
            window.push_back(&entries_.at(key));
    }
    report.counter.time_filtered = window.size();

    // stage 2: packet-count tolerance, inclusive integer bounds
    std::vector<const Entry*> survivors;
    if (d.heuristics.count_enabled()) {
        const double p = static_cast<double>(d.attack_pkt_count32);
        const auto lo = static_cast<std::uint64_t>(
            std::max(0.0, std::floor((1.0 - d.heuristics.volume_tolerance) * p)));
        const auto hi = static_cast<std::uint64_t>(
            std::ceil((1.0 + d.heuristics.volume_tolerance) * p));
        for (const Entry* e : window)
            if (e->pkt_count32 >= lo && e->pkt_count32 <= hi)
                survivors.push_back(e);
    } else {
        survivors = std::move(window);
    }
    report.counter.count_filtered = survivors.size();

    // stage 3: the vector metric
    for (const Entry* e : survivors) {
        ++report.counter.vector_comparisons;
        double score = 1.0;
        if (metric_match(*e, d, score)) {
            report.matched_keys.push_back(e->key);
            report.match_scores.push_back(score);
        }
    }

    // canonical order for deterministic aggregation
    std::vector<std::size_t> order(report.matched_keys.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return report.matched_keys[a] < report.matched_keys[b];
    });
    MatchReport sorted = report;
    for (std::size_t i = 0; i < order.size(); ++i) {
        sorted.matched_keys[i] = report.matched_keys[order[i]];
        sorted.match_scores[i] = report.match_scores[order[i]];
    }
    return sorted;
}

} // namespace revealnet
