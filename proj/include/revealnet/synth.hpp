#pragma once

#include <cstdint>
#include <vector>

#include "revealnet/flow.hpp"

namespace revealnet {

/// Parameters of the seeded synthetic-trace generator. Flow start times are
/// spread uniformly over the trace duration and per-flow packet counts are
/// drawn log-uniformly, so creation times and volumes disperse the way the
/// public per-packet datasets do.
struct SynthParams {
    std::uint64_t flow_count = 1000;
    double malicious_ratio = 625.0; // benign:malicious; malicious count = round(flows/(ratio+1))
    double duration_s = 60.0;
    std::uint32_t pkt_count_min = 4;
    std::uint32_t pkt_count_max = 512;
    enum class Arrival { uniform, poisson } arrival = Arrival::poisson;
    bool distinct_counts = true; // nudge duplicate packet counts apart
    std::uint64_t seed = 1;
};

/// Emits the full per-packet record stream, globally sorted by timestamp.
/// Byte-identical output for identical params.
std::vector<PacketRecord> generate_synthetic(const SynthParams& params);

} // namespace revealnet
