#include "revealnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "revealnet/errors.hpp"
#include "revealnet/rng.hpp"

namespace revealnet {

namespace {

constexpr std::uint64_t kLabelTag = 0x6c61626c;
constexpr std::uint64_t kFlowTag = 0x666c6f77;

FlowKey make_key(std::uint64_t i, Xoshiro256pp& rng) {
    FlowKey k;
    // one unique source host per flow keeps attribution ground truth exact
    k.src_ip = 0x0a000000u + static_cast<std::uint32_t>(i + 1);
    k.dst_ip = 0xc0a80000u + static_cast<std::uint32_t>(rng.next() % 254 + 1);
    k.src_port = static_cast<std::uint16_t>(1024 + rng.next() % 60000);
    static constexpr std::uint16_t dports[] = {80, 443, 8080, 53};
    k.dst_port = dports[rng.next() % 4];
    k.proto = (rng.next() & 1) ? 6 : 17;
    return k;
}

} // namespace

std::vector<PacketRecord> generate_synthetic(const SynthParams& p) {
    if (p.duration_s <= 0 || p.malicious_ratio < 0)
        throw ConfigError("synthetic generator: duration and ratio must be positive");
    if (p.pkt_count_min < 1 || p.pkt_count_max < p.pkt_count_min)
        throw ConfigError("synthetic generator: bad packet count range");

    const auto duration_us = static_cast<std::int64_t>(p.duration_s * 1e6);
    std::vector<PacketRecord> out;
    if (p.flow_count == 0)
        return out;

    // deterministic malicious subset
    const auto malicious_count = static_cast<std::uint64_t>(
        std::llround(static_cast<double>(p.flow_count) / (p.malicious_ratio + 1.0)));
    std::set<std::uint64_t> malicious;
    Xoshiro256pp label_rng(stream_seed(p.seed, kLabelTag));
    while (malicious.size() < std::min(malicious_count, p.flow_count))
        malicious.insert(label_rng.next() % p.flow_count);

    std::set<std::uint32_t> used_counts;
    for (std::uint64_t i = 0; i < p.flow_count; ++i) {
        Xoshiro256pp rng(stream_seed(p.seed, kFlowTag + i));
        const FlowKey key = make_key(i, rng);
        const Label label = malicious.count(i) ? Label::malicious : Label::benign;

        // log-uniform packet count, optionally forced distinct across flows
        const double lo = std::log(static_cast<double>(p.pkt_count_min));
        const double hi = std::log(static_cast<double>(p.pkt_count_max));
        auto count = static_cast<std::uint32_t>(
            std::llround(std::exp(lo + (hi - lo) * rng.uniform01())));
        count = std::clamp(count, p.pkt_count_min, p.pkt_count_max);
        if (p.distinct_counts) {
            while (used_counts.count(count))
                ++count;
            used_counts.insert(count);
        }

        // flow occupies a sub-interval of the trace
        const std::int64_t flow_dur =
            std::max<std::int64_t>(1'000'000, static_cast<std::int64_t>(
                duration_us * (0.05 + 0.45 * rng.uniform01())));
        const std::int64_t latest_start = std::max<std::int64_t>(0, duration_us - flow_dur);
        const std::int64_t start =
            static_cast<std::int64_t>(rng.uniform01() * static_cast<double>(latest_start));

        std::vector<std::int64_t> offsets;
        offsets.reserve(count);
        offsets.push_back(0);
        if (p.arrival == SynthParams::Arrival::uniform) {
            for (std::uint32_t j = 1; j < count; ++j)
                offsets.push_back(1 + static_cast<std::int64_t>(rng.uniform01() * (flow_dur - 1)));
        } else {
            // exponential gaps rescaled to fill the flow duration
            std::vector<double> gaps(count > 1 ? count - 1 : 0);
            double total = 0;
            for (auto& g : gaps) {
                g = -std::log(rng.uniform01());
                total += g;
            }
            double acc = 0;
            for (auto g : gaps) {
                acc += g;
                offsets.push_back(
                    std::max<std::int64_t>(1, static_cast<std::int64_t>(acc / total * flow_dur)));
            }
        }
        std::sort(offsets.begin(), offsets.end());
        for (auto off : offsets)
            out.push_back(PacketRecord{key, start + off, label});
    }

    std::stable_sort(out.begin(), out.end(), [](const PacketRecord& a, const PacketRecord& b) {
        return a.ts_us != b.ts_us ? a.ts_us < b.ts_us : a.key < b.key;
    });
    return out;
}

} // namespace revealnet
