#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "revealnet/errors.hpp"

namespace revealnet {

/// Binning grid: n bins of bin_width_us covering horizon_us from the flow's
/// anchor. n is always ceil(horizon / bin_width).
struct TamConfig {
    std::int64_t bin_width_us = 100'000;
    std::int64_t horizon_us = 60'000'000;
    std::size_t n = 600;

    static TamConfig from_horizon(std::int64_t bin_width_us, std::int64_t horizon_us) {
        if (bin_width_us <= 0 || horizon_us < bin_width_us)
            throw ConfigError("TamConfig: need bin_width_us > 0 and horizon_us >= bin_width_us");
        const auto n = static_cast<std::size_t>((horizon_us + bin_width_us - 1) / bin_width_us);
        return TamConfig{bin_width_us, horizon_us, n};
    }

    /// explicit bin-count override; horizon becomes n * bin_width
    static TamConfig from_bins(std::int64_t bin_width_us, std::size_t n) {
        if (bin_width_us <= 0 || n == 0)
            throw ConfigError("TamConfig: need bin_width_us > 0 and n >= 1");
        return TamConfig{bin_width_us, bin_width_us * static_cast<std::int64_t>(n), n};
    }
};

/// Single-row traffic aggregation matrix: per-bin packet counts for one flow,
/// anchored at the first recorded packet of that flow at that vantage.
struct TamVector {
    std::vector<std::uint32_t> counts;
    std::int64_t anchor_us = 0;

    bool operator==(const TamVector& other) const { return counts == other.counts; }
};

/// Bin index for a packet, or nullopt once past the horizon. Throws
/// NegativeOffset for packets before the anchor.
inline std::optional<std::size_t> tam_bin_index(const TamConfig& cfg, std::int64_t anchor_us,
                                                std::int64_t ts_us) {
    if (ts_us < anchor_us)
        throw NegativeOffset("packet precedes TAM anchor");
    const auto idx = static_cast<std::size_t>((ts_us - anchor_us) / cfg.bin_width_us);
    if (idx >= cfg.n)
        return std::nullopt;
    return idx;
}

/// Offline TAM construction from a packet timestamp stream (first packet
/// becomes the anchor). The online switch path must agree with this exactly.
inline TamVector build_tam(const TamConfig& cfg, std::span<const std::int64_t> ts_us) {
    TamVector tam;
    tam.counts.assign(cfg.n, 0);
    if (ts_us.empty())
        return tam;
    tam.anchor_us = ts_us.front();
    for (std::int64_t ts : ts_us) {
        if (auto idx = tam_bin_index(cfg, tam.anchor_us, ts))
            ++tam.counts[*idx];
    }
    return tam;
}

} // namespace revealnet
