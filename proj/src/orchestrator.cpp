#include "revealnet/orchestrator.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <ostream>

#include <json.hpp>

#include "revealnet/errors.hpp"

namespace revealnet {

namespace {

using nlohmann::json;

/// merged per-switch packet stream, ordered by (ts, key) for determinism
std::vector<PacketRecord> merge_streams(const std::vector<const FlowTrace*>& traces) {
    std::vector<PacketRecord> stream;
    std::size_t total = 0;
    for (const auto* t : traces)
        total += t->packets_us.size();
    stream.reserve(total);
    for (const auto* t : traces)
        for (std::int64_t ts : t->packets_us)
            stream.push_back(PacketRecord{t->key, ts, t->label});
    std::stable_sort(stream.begin(), stream.end(), [](const PacketRecord& a, const PacketRecord& b) {
        return a.ts_us != b.ts_us ? a.ts_us < b.ts_us : a.key < b.key;
    });
    return stream;
}

void feed(SwitchNode& node, const std::vector<const FlowTrace*>& traces) {
    for (const auto& pkt : merge_streams(traces))
        node.process_packet(pkt);
}

json key_json(const FlowKey& key) {
    return json{{"src_ip", format_ipv4(key.src_ip)},
                {"dst_ip", format_ipv4(key.dst_ip)},
                {"src_port", key.src_port},
                {"dst_port", key.dst_port},
                {"proto", key.proto}};
}

} // namespace

std::vector<std::uint64_t> Topology::flows_per_switch() const {
    std::vector<std::uint64_t> out(static_cast<std::size_t>(k_coop), 0);
    for (const auto& [key, sw] : assignment)
        ++out[static_cast<std::size_t>(sw)];
    return out;
}

Topology partition(const FlowMap& flows, int k_coop) {
    if (k_coop < 1)
        throw ConfigError("need at least one cooperating switch");
    Topology topo;
    topo.k_coop = k_coop;
    int next = 0;
    for (const auto& [key, trace] : flows) {
        topo.assignment.emplace(key, next);
        next = (next + 1) % k_coop;
    }
    return topo;
}

std::pair<std::optional<std::uint32_t>, bool> argmax_ip(const std::vector<IpScore>& ranked,
                                                        double eta) {
    if (ranked.empty() || ranked.front().score < eta)
        return {std::nullopt, false};
    const bool tie = ranked.size() > 1 && ranked[1].score == ranked.front().score;
    return {ranked.front().ip, tie};
}

FlowAttribution attribute(const FlowKey& malicious_key, const std::vector<MatchReport>& reports,
                          double eta) {
    FlowAttribution out;
    out.malicious_key = malicious_key;
    out.tracked = true;

    std::map<std::uint32_t, double> by_ip;
    for (const auto& report : reports) {
        for (std::size_t i = 0; i < report.matched_keys.size(); ++i)
            by_ip[report.matched_keys[i].src_ip] += report.match_scores[i];
    }
    out.ranked.reserve(by_ip.size());
    for (const auto& [ip, score] : by_ip)
        out.ranked.push_back(IpScore{ip, score});
    std::sort(out.ranked.begin(), out.ranked.end(), [](const IpScore& a, const IpScore& b) {
        return a.score != b.score ? a.score > b.score : a.ip < b.ip;
    });
    std::tie(out.chosen, out.tie) = argmax_ip(out.ranked, eta);
    return out;
}

Deployment::Deployment(const FlowMap& flows, const Topology& topology, const WanModel& wan,
                       const SwitchConfig& switch_cfg, bool parallel)
    : topology_(topology) {
    const ObservationMap observations = simulate(flows, wan);

    std::vector<std::vector<const FlowTrace*>> origin_by_switch(
        static_cast<std::size_t>(topology_.k_coop));
    std::vector<const FlowTrace*> attacked_traces;
    for (const auto& [key, dual] : observations) {
        const auto sw = topology_.assignment.at(key);
        origin_by_switch[static_cast<std::size_t>(sw)].push_back(&dual.origin);
        if (dual.attacked)
            attacked_traces.push_back(&*dual.attacked);
    }

    coop_.reserve(static_cast<std::size_t>(topology_.k_coop));
    for (int s = 0; s < topology_.k_coop; ++s)
        coop_.emplace_back(s, switch_cfg);
    attacked_.emplace_back(topology_.k_coop, switch_cfg);

    if (parallel) {
        std::vector<std::future<void>> jobs;
        jobs.reserve(coop_.size() + 1);
        for (int s = 0; s < topology_.k_coop; ++s)
            jobs.push_back(std::async(std::launch::async, [&, s] {
                feed(coop_[static_cast<std::size_t>(s)], origin_by_switch[static_cast<std::size_t>(s)]);
            }));
        jobs.push_back(std::async(std::launch::async, [&] { feed(attacked_.front(), attacked_traces); }));
        for (auto& j : jobs)
            j.get();
    } else {
        for (int s = 0; s < topology_.k_coop; ++s)
            feed(coop_[static_cast<std::size_t>(s)], origin_by_switch[static_cast<std::size_t>(s)]);
        feed(attacked_.front(), attacked_traces);
    }
}

RunResult Deployment::correlate(const HeuristicParams& heuristics, const MetricSpec& metric,
                                double eta, const std::set<FlowKey>& malicious, bool parallel,
                                std::ostream* transcript) const {
    RunResult result;
    result.counters_by_switch.assign(static_cast<std::size_t>(topology_.k_coop), {});
    result.scores.flows_by_switch = topology_.flows_per_switch();
    result.scores.tp_by_switch.assign(static_cast<std::size_t>(topology_.k_coop), 0);
    result.scores.fp_by_switch.assign(static_cast<std::size_t>(topology_.k_coop), 0);
    result.scores.malicious_by_switch.assign(static_cast<std::size_t>(topology_.k_coop), 0);
    for (const auto& key : malicious)
        ++result.scores.malicious_by_switch[static_cast<std::size_t>(topology_.assignment.at(key))];

    for (const auto& key : malicious) {
        // step 4: fetch the attacking flow's vector from the attacked switch
        ExportedVector exported;
        try {
            exported = attacked_.front().export_vector(key);
        } catch (const NotTracked&) {
            ++result.attack_flows_untracked;
            FlowAttribution miss;
            miss.malicious_key = key;
            miss.tracked = false;
            result.attribution.flows.push_back(std::move(miss));
            if (transcript)
                *transcript << json{{"step", "export"}, {"flow", key_json(key)},
                                    {"status", "not_tracked"}}.dump()
                            << '\n';
            continue;
        }
        result.ledger.sw_a_to_cm += exported.vec.payload_bits();
        if (transcript)
            *transcript << json{{"step", "export"}, {"flow", key_json(key)},
                                {"bits", exported.vec.payload_bits()}}.dump()
                        << '\n';

        // step 5: identical directive to every cooperating switch
        CorrelationDirective directive;
        directive.attack_vector = std::move(exported.vec);
        directive.attack_created_ts48 = exported.created_ts48;
        directive.attack_pkt_count32 = exported.pkt_count32;
        directive.representation = attacked_.front().config().representation;
        directive.heuristics = heuristics;
        directive.metric = metric;
        ++result.directives_dispatched;
        result.ledger.cm_to_sw_c += static_cast<std::uint64_t>(topology_.k_coop) * directive.wire_bits();
        if (transcript)
            *transcript << json{{"step", "directive"}, {"recipients", topology_.k_coop},
                                {"bits_each", directive.wire_bits()}}.dump()
                        << '\n';

        // step 6: local correlation everywhere, then deterministic reduce
        std::vector<MatchReport> reports(static_cast<std::size_t>(topology_.k_coop));
        auto correlate_one = [&](int s) {
            reports[static_cast<std::size_t>(s)] =
                coop_[static_cast<std::size_t>(s)].local_correlate(directive);
        };
        if (parallel) {
            std::vector<std::future<void>> jobs;
            jobs.reserve(static_cast<std::size_t>(topology_.k_coop));
            for (int s = 0; s < topology_.k_coop; ++s)
                jobs.push_back(std::async(std::launch::async, correlate_one, s));
            for (auto& j : jobs)
                j.get();
        } else {
            for (int s = 0; s < topology_.k_coop; ++s)
                correlate_one(s);
        }

        for (int s = 0; s < topology_.k_coop; ++s) {
            const auto& report = reports[static_cast<std::size_t>(s)];
            result.ledger.sw_c_to_cm += report.wire_bits();
            result.counters_by_switch[static_cast<std::size_t>(s)] += report.counter;
            for (const auto& matched : report.matched_keys) {
                if (matched == key)
                    ++result.scores.tp_by_switch[static_cast<std::size_t>(s)];
                else
                    ++result.scores.fp_by_switch[static_cast<std::size_t>(s)];
            }
            if (transcript)
                *transcript << json{{"step", "report"}, {"from", s},
                                    {"matches", report.matched_keys.size()},
                                    {"bits", report.wire_bits()}}.dump()
                            << '\n';
        }
        result.attribution.flows.push_back(attribute(key, reports, eta));
    }

    if (!malicious.empty()) {
        result.scores.rates_defined = true;
        result.scores.tpr_rate = tpr(result.scores.tp_by_switch, result.scores.malicious_by_switch);
        result.scores.fpr_rate = fpr(result.scores.fp_by_switch, malicious.size(),
                                     result.scores.flows_by_switch);
    }
    return result;
}

RunResult run_attribution(const FlowMap& flows, const Topology& topology, const RunOptions& opt,
                          const std::set<FlowKey>& malicious) {
    for (const auto& key : malicious)
        if (!flows.count(key))
            throw Error("malicious set contains a flow absent from the trace");
    Deployment deployment(flows, topology, opt.wan, opt.switch_cfg, opt.parallel);
    return deployment.correlate(opt.heuristics, opt.metric, opt.eta, malicious, opt.parallel,
                                opt.transcript);
}

} // namespace revealnet
