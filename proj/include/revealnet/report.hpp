#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "revealnet/accounting.hpp"
#include "revealnet/config.hpp"

namespace revealnet {

struct ScoreRow {
    Representation rep;
    double bin_width_s = 0;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    double loss_rate = 0;
    HeuristicMode heuristics = HeuristicMode::both;
    std::string metric;
    std::uint64_t malicious = 0;
    std::uint64_t tracked = 0;
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    bool rates_defined = false;
    Rational tpr;
    Rational fpr;
    std::uint64_t attributed = 0;
    std::uint64_t ties = 0;
};

struct ComparisonRow {
    Representation rep;
    double bin_width_s = 0;
    double loss_rate = 0;
    HeuristicMode mode = HeuristicMode::none;
    std::uint64_t attacking_flows = 0; // directives actually dispatched
    ComparisonCounter totals;
    double avg_vector_comparisons = 0; // per attacking flow, across all switches
};

struct StorageRow {
    Representation rep;
    double bin_width_s = 0;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
};

void write_scores_csv(std::ostream& out, std::span<const ScoreRow> rows);
void write_comparisons_csv(std::ostream& out, std::span<const ComparisonRow> rows);

/// Storage table: matrix overhead, marginal per-flow cost with and without
/// heuristics, and capacity in `memory_bytes`. TAM rows carry a note flagging
/// that the published per-flow bytes and stored-flow figures are mutually
/// inconsistent; the capacity column follows the formula.
void write_storage_csv(std::ostream& out, std::span<const StorageRow> rows,
                       std::uint64_t memory_bytes, std::uint64_t f_reference);

/// Bandwidth table: per-edge bits for the centralized and distributed designs
/// plus the overhead reduction.
void write_bandwidth_csv(std::ostream& out, const TableParams& params);

/// Deterministic run manifest: version, config echo, effective seeds, grid.
void write_manifest(std::ostream& out, const ExperimentConfig& cfg,
                    std::span<const std::string> outputs,
                    std::span<const std::string> grid_points);

} // namespace revealnet
