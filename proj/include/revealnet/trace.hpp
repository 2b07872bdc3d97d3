#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "revealnet/flow.hpp"

namespace revealnet {

/// Column-name mapping for CSV ingest. Defaults match the canonical layout
/// `src_ip,dst_ip,src_port,dst_port,proto,ts_us,label`. Datasets that use
/// different headers or attack-specific label strings are adapted here;
/// label_aliases maps extra label spellings onto {benign, malicious}.
struct TraceFormat {
    std::string col_src_ip = "src_ip";
    std::string col_dst_ip = "dst_ip";
    std::string col_src_port = "src_port";
    std::string col_dst_port = "dst_port";
    std::string col_proto = "proto";
    std::string col_ts_us = "ts_us";
    std::string col_label = "label";
    std::map<std::string, Label> label_aliases;
};

/// Parses a header-bearing CSV trace. Rows appear in file order; malformed
/// rows raise MalformedRow carrying the 1-based line number. Timestamps may
/// interleave across flows (a non-monotone clock is not an error).
std::vector<PacketRecord> parse_trace(std::istream& in, const TraceFormat& fmt = {});

/// Writes records in the canonical CSV layout (LF line endings). Parsing the
/// output reproduces the records field-exactly.
void serialize_trace(std::ostream& out, std::span<const PacketRecord> records);

/// Groups packets into per-flow traces with ascending timestamps. A key whose
/// packets carry both labels raises LabelConflict.
FlowMap group_flows(std::span<const PacketRecord> records);

/// Flow counts by label plus the packet-time span of the whole trace.
DatasetSummary summarize(const FlowMap& flows);

} // namespace revealnet
