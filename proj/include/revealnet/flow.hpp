#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace revealnet {

enum class Label : std::uint8_t { benign = 0, malicious = 1 };

const char* label_name(Label l);

/// 5-tuple identity of a flow. Canonical ordering is the lexicographic order
/// of the wire encoding (big-endian field concatenation), which coincides
/// with field-by-field tuple comparison.
struct FlowKey {
    std::uint32_t src_ip = 0; // IPv4, host order
    std::uint32_t dst_ip = 0;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint8_t proto = 0;

    auto operator<=>(const FlowKey&) const = default;
};

/// 192-bit wire form: src_ip(32) | dst_ip(32) | src_port(16) | dst_port(16) |
/// proto(8) | zero padding(88), all fields big-endian.
inline constexpr std::size_t kFlowKeyWireBytes = 24;
inline constexpr std::uint64_t kFlowKeyWireBits = 192;

std::array<std::uint8_t, kFlowKeyWireBytes> encode_flow_key(const FlowKey& key);
FlowKey decode_flow_key(const std::array<std::uint8_t, kFlowKeyWireBytes>& wire);

struct FlowKeyHash {
    std::size_t operator()(const FlowKey& k) const;
};

// dotted-quad helpers; parse throws Error on malformed input
std::uint32_t parse_ipv4(const std::string& s);
std::string format_ipv4(std::uint32_t ip);

/// One observed packet with its label. Timestamps are integer microseconds
/// relative to the trace epoch.
struct PacketRecord {
    FlowKey key;
    std::int64_t ts_us = 0;
    Label label = Label::benign;

    bool operator==(const PacketRecord&) const = default;
};

/// All packets of one flow at one vantage point, time-ordered.
struct FlowTrace {
    FlowKey key;
    std::vector<std::int64_t> packets_us; // sorted non-decreasing, non-empty
    Label label = Label::benign;

    std::int64_t start_time_us() const { return packets_us.front(); }
    std::size_t packet_count() const { return packets_us.size(); }
};

struct DatasetSummary {
    std::uint64_t benign_flows = 0;
    std::uint64_t malicious_flows = 0;
    double span_s = 0.0;
};

using FlowMap = std::map<FlowKey, FlowTrace>;

} // namespace revealnet
