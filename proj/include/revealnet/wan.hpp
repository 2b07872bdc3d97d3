#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "revealnet/flow.hpp"

namespace revealnet {

/// Relay channel between the origin vantage and the attacked vantage:
/// per-packet latency base + truncated-normal jitter, plus i.i.d. loss on
/// the attacked-side observation only.
struct WanModel {
    std::int64_t base_latency_us = 200'000;
    std::int64_t jitter_stddev_us = 20'000;
    double loss_rate = 0.0;
    std::uint64_t seed = 0;
};

/// The two observations of one flow. `attacked` is absent when every packet
/// was lost. `added_delay_us` holds the per-packet delay of each surviving
/// packet in origin order, i.e. the pairing before re-sorting.
struct DualObservation {
    FlowTrace origin;
    std::optional<FlowTrace> attacked;
    std::vector<std::int64_t> added_delay_us;
};

using ObservationMap = std::map<FlowKey, DualObservation>;

/// Applies the channel to every flow. Each flow consumes an independent
/// substream keyed by its FlowKey hash, so output is deterministic and
/// unaffected by which other flows are present. Per packet the stream
/// discipline is fixed: one loss draw, then one jitter draw, always.
ObservationMap simulate(const FlowMap& flows, const WanModel& model);

/// Mean (attacked - origin) over all surviving packets, using the original
/// pairing. Throws NoSurvivors when nothing got through.
double empirical_latency_us(const ObservationMap& obs);

} // namespace revealnet
