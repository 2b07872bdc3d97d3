#include "revealnet/accounting.hpp"

#include <numeric>

#include "revealnet/errors.hpp"

namespace revealnet {

namespace {

std::uint64_t sum(std::span<const std::uint64_t> v) {
    return std::accumulate(v.begin(), v.end(), std::uint64_t{0});
}

} // namespace

Rational tpr(std::span<const std::uint64_t> tp_by_switch,
             std::span<const std::uint64_t> malicious_by_switch) {
    if (tp_by_switch.size() != malicious_by_switch.size())
        throw DimensionMismatch("tp and malicious vectors differ in length");
    for (std::size_t i = 0; i < tp_by_switch.size(); ++i)
        if (tp_by_switch[i] > malicious_by_switch[i])
            throw Error("tp exceeds malicious count at switch " + std::to_string(i));
    const std::uint64_t den = sum(malicious_by_switch);
    if (den == 0)
        throw Error("TPR undefined: no malicious flows");
    return Rational{sum(tp_by_switch), den};
}

Rational fpr(std::span<const std::uint64_t> fp_by_switch, std::uint64_t f_m,
             std::span<const std::uint64_t> flows_by_switch) {
    if (fp_by_switch.size() != flows_by_switch.size())
        throw DimensionMismatch("fp and flow vectors differ in length");
    const std::uint64_t den = f_m * sum(flows_by_switch);
    if (den == 0)
        throw Error("FPR undefined: no candidate pairs");
    for (std::size_t i = 0; i < fp_by_switch.size(); ++i)
        if (fp_by_switch[i] > f_m * flows_by_switch[i])
            throw Error("fp exceeds candidate pairs at switch " + std::to_string(i));
    return Rational{sum(fp_by_switch), den};
}

std::uint64_t vector_payload_bits(Representation rep, std::uint64_t m_or_n) {
    return rep == Representation::coskun_bin ? m_or_n : 32 * m_or_n;
}

std::uint64_t projection_matrix_bits(Representation rep, std::uint64_t n, std::uint64_t m) {
    return rep == Representation::tam ? 0 : 32 * n * m;
}

std::uint64_t marginal_flow_bits(Representation rep, std::uint64_t n, std::uint64_t m,
                                 bool with_heuristics) {
    std::uint64_t bits = 0;
    switch (rep) {
    case Representation::coskun_bin: bits = m; break;
    case Representation::coskun_int:
    case Representation::nasr_int: bits = 32 * m; break;
    case Representation::tam: bits = 32 * n; break;
    }
    if (with_heuristics)
        bits += kMetadataBits; // 32-bit packet count + 48-bit creation time
    return bits;
}

std::uint64_t storage_bits(Representation rep, std::uint64_t f, std::uint64_t n, std::uint64_t m,
                           bool with_heuristics) {
    return projection_matrix_bits(rep, n, m) + f * marginal_flow_bits(rep, n, m, with_heuristics);
}

std::uint64_t capacity(Representation rep, std::uint64_t memory_bytes, std::uint64_t n,
                       std::uint64_t m) {
    const std::uint64_t memory_bits = 8 * memory_bytes;
    const std::uint64_t matrix = projection_matrix_bits(rep, n, m);
    if (memory_bits < matrix)
        throw Error("memory smaller than the projection-matrix overhead");
    return (memory_bits - matrix) / marginal_flow_bits(rep, n, m, false);
}

CostLedger bandwidth_ledger(Scenario scenario, Representation rep, std::uint64_t f_total,
                            std::uint64_t f_m, std::uint64_t k_coop, std::uint64_t m_or_n) {
    const std::uint64_t vec = vector_payload_bits(rep, m_or_n);
    CostLedger ledger;
    if (scenario == Scenario::centralized) {
        ledger.sw_c_to_cs = f_total * vec;
        ledger.sw_a_to_cs = f_m * vec;
    } else {
        ledger.sw_a_to_cm = f_m * vec;
        ledger.cm_to_sw_c = k_coop * f_m * vec;
        ledger.sw_c_to_cm = k_coop * f_m * kFlowKeyWireBits;
    }
    return ledger;
}

double reduction_pct(const CostLedger& central, const CostLedger& distributed) {
    const auto c = central.central_total();
    if (c == 0)
        return 0.0;
    return 100.0 * (1.0 - static_cast<double>(distributed.distributed_total()) /
                              static_cast<double>(c));
}

} // namespace revealnet
