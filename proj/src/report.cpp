#include "revealnet/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "revealnet/errors.hpp"

namespace revealnet {

namespace {

std::string fmt(double v, const char* spec = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

} // namespace

void write_scores_csv(std::ostream& out, std::span<const ScoreRow> rows) {
    out << "representation,bin_width_s,n,m,loss_rate,heuristics,metric,malicious,tracked,"
           "tp,fp,tpr,fpr,attributed,ties\n";
    for (const auto& r : rows) {
        out << representation_name(r.rep) << ',' << fmt(r.bin_width_s, "%.6g") << ',' << r.n
            << ',' << r.m << ',' << fmt(r.loss_rate, "%.6g") << ','
            << heuristic_mode_name(r.heuristics) << ',' << r.metric << ',' << r.malicious << ','
            << r.tracked << ',' << r.tp << ',' << r.fp << ','
            << (r.rates_defined ? fmt(r.tpr.value()) : std::string()) << ','
            << (r.rates_defined ? fmt(r.fpr.value()) : std::string()) << ',' << r.attributed
            << ',' << r.ties << '\n';
    }
}

void write_comparisons_csv(std::ostream& out, std::span<const ComparisonRow> rows) {
    out << "representation,bin_width_s,loss_rate,heuristic_mode,attacking_flows,"
           "candidates_scanned,time_filtered,count_filtered,vector_comparisons,"
           "avg_vector_comparisons_per_attack\n";
    for (const auto& r : rows) {
        out << representation_name(r.rep) << ',' << fmt(r.bin_width_s, "%.6g") << ','
            << fmt(r.loss_rate, "%.6g") << ',' << heuristic_mode_name(r.mode) << ','
            << r.attacking_flows << ',' << r.totals.candidates_scanned << ','
            << r.totals.time_filtered << ',' << r.totals.count_filtered << ','
            << r.totals.vector_comparisons << ',' << fmt(r.avg_vector_comparisons) << '\n';
    }
}

void write_storage_csv(std::ostream& out, std::span<const StorageRow> rows,
                       std::uint64_t memory_bytes, std::uint64_t f_reference) {
    out << "method,bin_width_s,n,m,matrix_bits,marginal_flow_bits,marginal_flow_bytes,"
           "marginal_flow_bits_with_heuristics,total_bits_f" << f_reference
        << ",stored_flows_in_" << memory_bytes << "B,note\n";
    for (const auto& r : rows) {
        const auto matrix = projection_matrix_bits(r.rep, r.n, r.m);
        const auto marginal = marginal_flow_bits(r.rep, r.n, r.m, false);
        const auto marginal_h = marginal_flow_bits(r.rep, r.n, r.m, true);
        const auto total = storage_bits(r.rep, f_reference, r.n, r.m, false);
        const auto cap = capacity(r.rep, memory_bytes, r.n, r.m);
        const char* note = r.rep == Representation::tam
                               ? "published per-flow bytes and stored-flow count disagree;"
                                 " capacity follows the formula"
                               : "";
        out << representation_name(r.rep) << ',' << fmt(r.bin_width_s, "%.6g") << ',' << r.n
            << ',' << r.m << ',' << matrix << ',' << marginal << ','
            << fmt(static_cast<double>(marginal) / 8.0, "%.6g") << ',' << marginal_h << ','
            << total << ',' << cap << ',' << note << '\n';
    }
}

void write_bandwidth_csv(std::ostream& out, const TableParams& p) {
    out << "method,vector_bits,sw_c_to_cs,sw_a_to_cs,central_total,sw_a_to_cm,cm_to_sw_c,"
           "sw_c_to_cm,distributed_total,reduction_pct\n";
    static constexpr Representation kOrder[] = {Representation::coskun_bin,
                                                Representation::coskun_int,
                                                Representation::nasr_int, Representation::tam};
    for (Representation rep : kOrder) {
        const std::uint64_t m_or_n = rep == Representation::tam ? p.tam_n_bandwidth : p.m;
        const auto central =
            bandwidth_ledger(Scenario::centralized, rep, p.f_total, p.f_m, p.k_coop, m_or_n);
        const auto dist =
            bandwidth_ledger(Scenario::distributed, rep, p.f_total, p.f_m, p.k_coop, m_or_n);
        out << representation_name(rep) << ',' << vector_payload_bits(rep, m_or_n) << ','
            << central.sw_c_to_cs << ',' << central.sw_a_to_cs << ',' << central.central_total()
            << ',' << dist.sw_a_to_cm << ',' << dist.cm_to_sw_c << ',' << dist.sw_c_to_cm << ','
            << dist.distributed_total() << ',' << fmt(reduction_pct(central, dist), "%.1f")
            << '\n';
    }
}

void write_manifest(std::ostream& out, const ExperimentConfig& cfg,
                    std::span<const std::string> outputs,
                    std::span<const std::string> grid_points) {
    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["seed"] = cfg.seed;
    manifest["effective_seeds"] = {{"wan", cfg.effective_wan_seed()},
                                   {"matrix", cfg.effective_matrix_seed()},
                                   {"synthetic", cfg.effective_synth_seed()}};
    try {
        manifest["config"] = nlohmann::json::parse(cfg.raw_json);
    } catch (const nlohmann::json::exception&) {
        manifest["config"] = nullptr;
    }
    manifest["grid"] = std::vector<std::string>(grid_points.begin(), grid_points.end());
    manifest["outputs"] = std::vector<std::string>(outputs.begin(), outputs.end());
    out << manifest.dump(2) << '\n';
}

} // namespace revealnet
