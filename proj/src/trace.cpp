#include "revealnet/trace.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "revealnet/errors.hpp"

namespace revealnet {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

template <typename T>
T parse_uint_field(const std::string& s, std::uint64_t max, const char* what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v > max)
        throw Error(std::string("bad ") + what + ": " + s);
    return static_cast<T>(v);
}

std::int64_t parse_ts_field(const std::string& s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0)
        throw Error("bad ts_us: " + s);
    return v;
}

struct ColumnIndex {
    std::size_t src_ip, dst_ip, src_port, dst_port, proto, ts_us, label;
};

ColumnIndex resolve_columns(const std::string& header, const TraceFormat& fmt) {
    const auto cols = split_csv(header);
    auto find = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == name)
                return i;
        throw MalformedRow(1, "missing column '" + name + "' in header");
    };
    return ColumnIndex{find(fmt.col_src_ip),   find(fmt.col_dst_ip), find(fmt.col_src_port),
                       find(fmt.col_dst_port), find(fmt.col_proto),  find(fmt.col_ts_us),
                       find(fmt.col_label)};
}

Label parse_label(const std::string& s, const TraceFormat& fmt) {
    if (s == "benign")
        return Label::benign;
    if (s == "malicious")
        return Label::malicious;
    if (auto it = fmt.label_aliases.find(s); it != fmt.label_aliases.end())
        return it->second;
    throw Error("bad label: " + s);
}

} // namespace

std::vector<PacketRecord> parse_trace(std::istream& in, const TraceFormat& fmt) {
    std::string line;
    if (!std::getline(in, line))
        throw MalformedRow(1, "empty input, expected CSV header");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    const ColumnIndex idx = resolve_columns(line, fmt);

    std::vector<PacketRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto fields = split_csv(line);
        const std::size_t needed =
            std::max({idx.src_ip, idx.dst_ip, idx.src_port, idx.dst_port, idx.proto, idx.ts_us,
                      idx.label}) +
            1;
        if (fields.size() < needed)
            throw MalformedRow(lineno, "expected at least " + std::to_string(needed) +
                                           " fields, got " + std::to_string(fields.size()));
        try {
            PacketRecord rec;
            rec.key.src_ip = parse_ipv4(fields[idx.src_ip]);
            rec.key.dst_ip = parse_ipv4(fields[idx.dst_ip]);
            rec.key.src_port = parse_uint_field<std::uint16_t>(fields[idx.src_port], 65535, "src_port");
            rec.key.dst_port = parse_uint_field<std::uint16_t>(fields[idx.dst_port], 65535, "dst_port");
            rec.key.proto = parse_uint_field<std::uint8_t>(fields[idx.proto], 255, "proto");
            rec.ts_us = parse_ts_field(fields[idx.ts_us]);
            rec.label = parse_label(fields[idx.label], fmt);
            out.push_back(rec);
        } catch (const Error& e) {
            throw MalformedRow(lineno, e.what());
        }
    }
    return out;
}

void serialize_trace(std::ostream& out, std::span<const PacketRecord> records) {
    out << "src_ip,dst_ip,src_port,dst_port,proto,ts_us,label\n";
    for (const auto& r : records) {
        out << format_ipv4(r.key.src_ip) << ',' << format_ipv4(r.key.dst_ip) << ','
            << r.key.src_port << ',' << r.key.dst_port << ',' << unsigned{r.key.proto} << ','
            << r.ts_us << ',' << label_name(r.label) << '\n';
    }
}

FlowMap group_flows(std::span<const PacketRecord> records) {
    FlowMap flows;
    for (const auto& r : records) {
        auto [it, inserted] = flows.try_emplace(r.key);
        FlowTrace& t = it->second;
        if (inserted) {
            t.key = r.key;
            t.label = r.label;
        } else if (t.label != r.label) {
            throw LabelConflict("conflicting labels for flow " + format_ipv4(r.key.src_ip) + ":" +
                                std::to_string(r.key.src_port) + " -> " +
                                format_ipv4(r.key.dst_ip) + ":" + std::to_string(r.key.dst_port));
        }
        t.packets_us.push_back(r.ts_us);
    }
    for (auto& [key, trace] : flows)
        std::sort(trace.packets_us.begin(), trace.packets_us.end());
    return flows;
}

DatasetSummary summarize(const FlowMap& flows) {
    DatasetSummary s;
    std::int64_t lo = 0, hi = 0;
    bool any = false;
    for (const auto& [key, trace] : flows) {
        if (trace.label == Label::benign)
            ++s.benign_flows;
        else
            ++s.malicious_flows;
        if (!any) {
            lo = trace.packets_us.front();
            hi = trace.packets_us.back();
            any = true;
        } else {
            lo = std::min(lo, trace.packets_us.front());
            hi = std::max(hi, trace.packets_us.back());
        }
    }
    s.span_s = any ? static_cast<double>(hi - lo) / 1e6 : 0.0;
    return s;
}

} // namespace revealnet
