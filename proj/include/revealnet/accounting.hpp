#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "revealnet/correlation.hpp"

namespace revealnet {

/// Exact ratio; value() is for display only.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

/// TPR = sum TP^s / sum f_m^s over all switches. Throws Error on 0/0.
Rational tpr(std::span<const std::uint64_t> tp_by_switch,
             std::span<const std::uint64_t> malicious_by_switch);

/// FPR = sum FP^s / (f_m * sum f^s): the denominator counts every potential
/// false-positive pair across all switches.
Rational fpr(std::span<const std::uint64_t> fp_by_switch, std::uint64_t f_m,
             std::span<const std::uint64_t> flows_by_switch);

struct Scores {
    std::vector<std::uint64_t> tp_by_switch;
    std::vector<std::uint64_t> fp_by_switch;
    std::vector<std::uint64_t> flows_by_switch;
    std::vector<std::uint64_t> malicious_by_switch;
    bool rates_defined = false; // false when there were no malicious flows
    Rational tpr_rate;
    Rational fpr_rate;
};

// --- storage model (integers are charged 32 bits) ---

/// Feature-vector wire/storage size per flow: m bits for binary sketches,
/// 32m for integer sketches, 32n for TAMs. `m_or_n` is n for tam, m otherwise.
std::uint64_t vector_payload_bits(Representation rep, std::uint64_t m_or_n);

/// Projection-matrix overhead: 32 n m bits; zero for tam.
std::uint64_t projection_matrix_bits(Representation rep, std::uint64_t n, std::uint64_t m);

/// Marginal per-flow storage; heuristics add the 32-bit count and 48-bit
/// creation-timestamp metadata rows.
std::uint64_t marginal_flow_bits(Representation rep, std::uint64_t n, std::uint64_t m,
                                 bool with_heuristics);

/// Total switch storage for f flows.
std::uint64_t storage_bits(Representation rep, std::uint64_t f, std::uint64_t n, std::uint64_t m,
                           bool with_heuristics);

/// Max flows storable in `memory_bytes` after the projection-matrix
/// overhead. Throws Error when memory cannot even hold the matrix.
std::uint64_t capacity(Representation rep, std::uint64_t memory_bytes, std::uint64_t n,
                       std::uint64_t m);

// --- bandwidth model ---

/// Bit counters for every edge of the two deployment shapes. A run fills
/// only the distributed edges; closed forms fill either scenario.
struct CostLedger {
    // centralized: every switch ships all vectors to the central server
    std::uint64_t sw_c_to_cs = 0;
    std::uint64_t sw_a_to_cs = 0;
    // distributed: attacked switch -> manager -> cooperating switches -> manager
    std::uint64_t sw_a_to_cm = 0;
    std::uint64_t cm_to_sw_c = 0;
    std::uint64_t sw_c_to_cm = 0;

    std::uint64_t central_total() const { return sw_c_to_cs + sw_a_to_cs; }
    std::uint64_t distributed_total() const { return sw_a_to_cm + cm_to_sw_c + sw_c_to_cm; }

    CostLedger& operator+=(const CostLedger& o) {
        sw_c_to_cs += o.sw_c_to_cs;
        sw_a_to_cs += o.sw_a_to_cs;
        sw_a_to_cm += o.sw_a_to_cm;
        cm_to_sw_c += o.cm_to_sw_c;
        sw_c_to_cm += o.sw_c_to_cm;
        return *this;
    }
};

enum class Scenario { centralized, distributed };

/// Closed-form communication cost. Centralized: all f_total vectors to the
/// central server plus the f_m attacking vectors. Distributed: f_m vectors
/// up to the manager, relayed to k_coop switches, and one 192-bit matched
/// tuple per (switch, attacking flow) back.
CostLedger bandwidth_ledger(Scenario scenario, Representation rep, std::uint64_t f_total,
                            std::uint64_t f_m, std::uint64_t k_coop, std::uint64_t m_or_n);

/// 100 * (1 - distributed/centralized); 0 when the centralized total is 0.
double reduction_pct(const CostLedger& central, const CostLedger& distributed);

} // namespace revealnet
