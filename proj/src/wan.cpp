#include "revealnet/wan.hpp"

#include <algorithm>
#include <cmath>

#include "revealnet/errors.hpp"
#include "revealnet/rng.hpp"

namespace revealnet {

ObservationMap simulate(const FlowMap& flows, const WanModel& model) {
    if (model.base_latency_us < 0 || model.jitter_stddev_us < 0 || model.loss_rate < 0.0 ||
        model.loss_rate > 1.0)
        throw ConfigError("invalid WAN model");

    ObservationMap out;
    for (const auto& [key, origin] : flows) {
        Xoshiro256pp rng(flow_stream_seed(model.seed, key));
        DualObservation dual;
        dual.origin = origin;

        std::vector<std::int64_t> attacked_ts;
        attacked_ts.reserve(origin.packets_us.size());
        for (std::int64_t ts : origin.packets_us) {
            const double u = rng.uniform01();
            const double z = rng.standard_normal();
            // u is never 0, so loss_rate 0 keeps everything and 1 drops everything;
            // the drop set only grows as loss_rate grows for a fixed seed
            if (u <= model.loss_rate)
                continue;
            const auto delay = std::max<std::int64_t>(
                0, std::llround(static_cast<double>(model.base_latency_us) +
                                static_cast<double>(model.jitter_stddev_us) * z));
            attacked_ts.push_back(ts + delay);
            dual.added_delay_us.push_back(delay);
        }
        if (!attacked_ts.empty()) {
            std::sort(attacked_ts.begin(), attacked_ts.end());
            dual.attacked = FlowTrace{key, std::move(attacked_ts), origin.label};
        }
        out.emplace(key, std::move(dual));
    }
    return out;
}

double empirical_latency_us(const ObservationMap& obs) {
    long double sum = 0;
    std::uint64_t count = 0;
    for (const auto& [key, dual] : obs) {
        for (std::int64_t d : dual.added_delay_us) {
            sum += static_cast<long double>(d);
            ++count;
        }
    }
    if (count == 0)
        throw NoSurvivors("no packet survived the channel");
    return static_cast<double>(sum / static_cast<long double>(count));
}

} // namespace revealnet
