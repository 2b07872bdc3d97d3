#include "revealnet/flow.hpp"

#include <cstdio>

#include "revealnet/errors.hpp"

namespace revealnet {

const char* label_name(Label l) {
    return l == Label::benign ? "benign" : "malicious";
}

std::array<std::uint8_t, kFlowKeyWireBytes> encode_flow_key(const FlowKey& key) {
    std::array<std::uint8_t, kFlowKeyWireBytes> wire{};
    auto put32 = [&](std::size_t off, std::uint32_t v) {
        wire[off] = static_cast<std::uint8_t>(v >> 24);
        wire[off + 1] = static_cast<std::uint8_t>(v >> 16);
        wire[off + 2] = static_cast<std::uint8_t>(v >> 8);
        wire[off + 3] = static_cast<std::uint8_t>(v);
    };
    auto put16 = [&](std::size_t off, std::uint16_t v) {
        wire[off] = static_cast<std::uint8_t>(v >> 8);
        wire[off + 1] = static_cast<std::uint8_t>(v);
    };
    put32(0, key.src_ip);
    put32(4, key.dst_ip);
    put16(8, key.src_port);
    put16(10, key.dst_port);
    wire[12] = key.proto;
    // bytes 13..23 stay zero padding
    return wire;
}

FlowKey decode_flow_key(const std::array<std::uint8_t, kFlowKeyWireBytes>& wire) {
    auto get32 = [&](std::size_t off) {
        return (static_cast<std::uint32_t>(wire[off]) << 24) |
               (static_cast<std::uint32_t>(wire[off + 1]) << 16) |
               (static_cast<std::uint32_t>(wire[off + 2]) << 8) |
               static_cast<std::uint32_t>(wire[off + 3]);
    };
    auto get16 = [&](std::size_t off) {
        return static_cast<std::uint16_t>((wire[off] << 8) | wire[off + 1]);
    };
    FlowKey key;
    key.src_ip = get32(0);
    key.dst_ip = get32(4);
    key.src_port = get16(8);
    key.dst_port = get16(10);
    key.proto = wire[12];
    return key;
}

std::size_t FlowKeyHash::operator()(const FlowKey& k) const {
    std::uint64_t h = 14695981039346656037ULL;
    auto fold = [&](std::uint64_t v, int bytes) {
        for (int i = bytes - 1; i >= 0; --i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    fold(k.src_ip, 4);
    fold(k.dst_ip, 4);
    fold(k.src_port, 2);
    fold(k.dst_port, 2);
    fold(k.proto, 1);
    return static_cast<std::size_t>(h);
}

std::uint32_t parse_ipv4(const std::string& s) {
    std::uint32_t octets[4];
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        if (pos >= s.size() || s[pos] < '0' || s[pos] > '9')
            throw Error("bad IPv4 address: " + s);
        std::uint32_t v = 0;
        std::size_t digits = 0;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            v = v * 10 + static_cast<std::uint32_t>(s[pos] - '0');
            if (v > 255 || ++digits > 3)
                throw Error("bad IPv4 address: " + s);
            ++pos;
        }
        octets[i] = v;
        if (i < 3) {
            if (pos >= s.size() || s[pos] != '.')
                throw Error("bad IPv4 address: " + s);
            ++pos;
        }
    }
    if (pos != s.size())
        throw Error("bad IPv4 address: " + s);
    return (octets[0] << 24) | (octets[1] << 16) | (octets[2] << 8) | octets[3];
}

std::string format_ipv4(std::uint32_t ip) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (ip >> 24) & 0xff, (ip >> 16) & 0xff,
                  (ip >> 8) & 0xff, ip & 0xff);
    return buf;
}

} // namespace revealnet
