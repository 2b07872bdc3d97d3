#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <vector>

#include "revealnet/accounting.hpp"
#include "revealnet/switch_node.hpp"
#include "revealnet/wan.hpp"

namespace revealnet {

/// k cooperating border switches plus one attacked switch. Every origin flow
/// is assigned to exactly one cooperating switch; the attacked switch sees
/// the attacked-side observation of every flow.
struct Topology {
    int k_coop = 19;
    std::map<FlowKey, int> assignment;

    std::vector<std::uint64_t> flows_per_switch() const;
};

/// Round-robin over flows in canonical FlowKey order; switch loads differ by
/// at most one.
Topology partition(const FlowMap& flows, int k_coop);

struct IpScore {
    std::uint32_t ip = 0;
    double score = 0.0;
};

/// Attribution outcome for one malicious flow.
struct FlowAttribution {
    FlowKey malicious_key;
    bool tracked = false;               // false: evicted/lost before export
    std::vector<IpScore> ranked;        // descending score, ties by ascending IP
    std::optional<std::uint32_t> chosen; // argmax source IP, if best score >= eta
    bool tie = false;                    // runner-up had an equal score
};

struct AttributionResult {
    std::vector<FlowAttribution> flows;
};

/// Argmax with lexicographic-IP tie-break over already-aggregated scores.
std::pair<std::optional<std::uint32_t>, bool> argmax_ip(const std::vector<IpScore>& ranked,
                                                        double eta);

/// Aggregates the cooperating switches' reports for one malicious flow:
/// scores are grouped by source IP (each exact match contributes 1; the
/// relaxed mode sums cosine scores).
FlowAttribution attribute(const FlowKey& malicious_key, const std::vector<MatchReport>& reports,
                          double eta);

struct RunOptions {
    WanModel wan;
    SwitchConfig switch_cfg; // template applied to every switch
    HeuristicParams heuristics;
    MetricSpec metric;
    double eta = 1.0;
    bool parallel = true;
    std::ostream* transcript = nullptr; // line-delimited JSON audit of all messages
};

struct RunResult {
    AttributionResult attribution;
    CostLedger ledger;
    Scores scores;
    std::vector<ComparisonCounter> counters_by_switch;
    std::uint64_t directives_dispatched = 0;
    std::uint64_t attack_flows_untracked = 0;
};

/// Streams already split per vantage point and fed through the switches;
/// reusable across heuristic/metric settings since correlation is const.
class Deployment {
public:
    Deployment(const FlowMap& flows, const Topology& topology, const WanModel& wan,
               const SwitchConfig& switch_cfg, bool parallel = true);

    const SwitchNode& coop_switch(int id) const { return coop_[id]; }
    const SwitchNode& attacked_switch() const { return attacked_.front(); }
    const Topology& topology() const { return topology_; }

    /// Steps 4-6 of the workflow for every flow in `malicious`: export the
    /// attacked-side vector, fan a directive out to every cooperating
    /// switch, gather reports, attribute, and account every message's bits.
    RunResult correlate(const HeuristicParams& heuristics, const MetricSpec& metric, double eta,
                        const std::set<FlowKey>& malicious, bool parallel = true,
                        std::ostream* transcript = nullptr) const;

private:
    Topology topology_;
    std::vector<SwitchNode> coop_;
    std::vector<SwitchNode> attacked_; // single element; vector avoids default-construct
};

/// The whole six-step attribution workflow in one call.
RunResult run_attribution(const FlowMap& flows, const Topology& topology, const RunOptions& opt,
                          const std::set<FlowKey>& malicious);

} // namespace revealnet
