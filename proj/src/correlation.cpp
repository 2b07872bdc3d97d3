#include "revealnet/correlation.hpp"

#include "revealnet/errors.hpp"

namespace revealnet {

const char* representation_name(Representation r) {
    switch (r) {
    case Representation::tam: return "tam";
    case Representation::coskun_int: return "coskun_int";
    case Representation::coskun_bin: return "coskun_bin";
    case Representation::nasr_int: return "nasr_int";
    }
    return "?";
}

Representation representation_from_name(const std::string& name) {
    if (name == "tam") return Representation::tam;
    if (name == "coskun_int") return Representation::coskun_int;
    if (name == "coskun_bin") return Representation::coskun_bin;
    if (name == "nasr_int") return Representation::nasr_int;
    throw UnknownMethod("unknown representation: " + name);
}

MatrixKind matrix_kind_for(Representation r) {
    return r == Representation::nasr_int ? MatrixKind::scaled_gaussian : MatrixKind::bernoulli;
}

const char* heuristic_mode_name(HeuristicMode m) {
    switch (m) {
    case HeuristicMode::none: return "none";
    case HeuristicMode::time: return "time";
    case HeuristicMode::count: return "count";
    case HeuristicMode::both: return "both";
    }
    return "?";
}

HeuristicMode heuristic_mode_from_name(const std::string& name) {
    if (name == "none") return HeuristicMode::none;
    if (name == "time") return HeuristicMode::time;
    if (name == "count") return HeuristicMode::count;
    if (name == "both") return HeuristicMode::both;
    throw ConfigError("unknown heuristic mode: " + name);
}

const char* metric_kind_name(MetricKind k) {
    switch (k) {
    case MetricKind::hamming_exact: return "hamming_exact";
    case MetricKind::cosine_exact: return "cosine_exact";
    case MetricKind::hamming_threshold: return "hamming_threshold";
    case MetricKind::cosine_threshold: return "cosine_threshold";
    }
    return "?";
}

MetricSpec default_metric(Representation r) {
    MetricSpec spec;
    spec.kind = r == Representation::nasr_int ? MetricKind::cosine_exact
                                              : MetricKind::hamming_exact;
    return spec;
}

std::uint64_t FeatureVector::payload_bits() const {
    switch (rep) {
    case Representation::coskun_bin: return bits.bits.size();
    case Representation::coskun_int:
    case Representation::nasr_int: return 32ull * sketch.values.size();
    case Representation::tam: return 32ull * tam.counts.size();
    }
    return 0;
}

} // namespace revealnet
