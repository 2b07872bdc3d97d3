#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "revealnet/errors.hpp"
#include "revealnet/rng.hpp"
#include "revealnet/synth.hpp"
#include "revealnet/trace.hpp"

using namespace revealnet;

namespace {

const char* kHeader = "src_ip,dst_ip,src_port,dst_port,proto,ts_us,label\n";

std::vector<PacketRecord> parse(const std::string& text, const TraceFormat& fmt = {}) {
    std::istringstream in(text);
    return parse_trace(in, fmt);
}

FlowKey key_a() {
    return FlowKey{parse_ipv4("10.0.0.1"), parse_ipv4("10.0.0.2"), 5555, 80, 6};
}

} // namespace

TEST_SUITE_BEGIN("trace");

TEST_CASE("flow key wire form is 192 bits and round-trips") {
    const FlowKey key{0x0a000001, 0xc0a80002, 0x1234, 0x0050, 17};
    const auto wire = encode_flow_key(key);
    REQUIRE(wire.size() == 24);
    CHECK(wire[0] == 0x0a);
    CHECK(wire[3] == 0x01);
    CHECK(wire[4] == 0xc0);
    CHECK(wire[8] == 0x12);
    CHECK(wire[9] == 0x34);
    CHECK(wire[10] == 0x00);
    CHECK(wire[11] == 0x50);
    CHECK(wire[12] == 17);
    for (std::size_t i = 13; i < 24; ++i)
        CHECK(wire[i] == 0);
    CHECK(decode_flow_key(wire) == key);
}

TEST_CASE("ipv4 parse and format") {
    CHECK(parse_ipv4("10.0.0.1") == 0x0a000001u);
    CHECK(format_ipv4(0xc0a80102u) == "192.168.1.2");
    CHECK_THROWS_AS(parse_ipv4("10.0.0"), Error);
    CHECK_THROWS_AS(parse_ipv4("10.0.0.256"), Error);
    CHECK_THROWS_AS(parse_ipv4("10.0.0.1.2"), Error);
    CHECK_THROWS_AS(parse_ipv4("a.b.c.d"), Error);
}

TEST_CASE("parse_trace maps one row to one record") {
    const auto records = parse(std::string(kHeader) + "10.0.0.1,10.0.0.2,5555,80,6,1000,benign\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0].key == key_a());
    CHECK(records[0].ts_us == 1000);
    CHECK(records[0].label == Label::benign);
}

TEST_CASE("parse_trace on header-only file yields empty sequence") {
    CHECK(parse(kHeader).empty());
}

TEST_CASE("parse_trace rejects unknown labels with the line number") {
    const std::string text = std::string(kHeader) + "10.0.0.1,10.0.0.2,5555,80,6,1000,evil\n";
    try {
        parse(text);
        FAIL("expected MalformedRow");
    } catch (const MalformedRow& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("parse_trace rejects bad ports, ips and timestamps") {
    CHECK_THROWS_AS(parse(std::string(kHeader) + "10.0.0.1,10.0.0.2,70000,80,6,1000,benign\n"),
                    MalformedRow);
    CHECK_THROWS_AS(parse(std::string(kHeader) + "10.0.0,10.0.0.2,5555,80,6,1000,benign\n"),
                    MalformedRow);
    CHECK_THROWS_AS(parse(std::string(kHeader) + "10.0.0.1,10.0.0.2,5555,80,6,-5,benign\n"),
                    MalformedRow);
    CHECK_THROWS_AS(parse(std::string(kHeader) + "10.0.0.1,10.0.0.2,5555,80,999,1000,benign\n"),
                    MalformedRow);
}

TEST_CASE("label aliases map dataset attack names onto malicious") {
    TraceFormat fmt;
    fmt.label_aliases["bitcoinminer"] = Label::malicious;
    const auto records =
        parse(std::string(kHeader) + "10.0.0.1,10.0.0.2,5555,80,6,1000,bitcoinminer\n", fmt);
    REQUIRE(records.size() == 1);
    CHECK(records[0].label == Label::malicious);
}

TEST_CASE("column mapping adapts foreign headers") {
    TraceFormat fmt;
    fmt.col_src_ip = "sip";
    fmt.col_ts_us = "time";
    const auto records = parse("sip,dst_ip,src_port,dst_port,proto,time,label\n"
                               "10.0.0.1,10.0.0.2,5555,80,6,77,malicious\n",
                               fmt);
    REQUIRE(records.size() == 1);
    CHECK(records[0].ts_us == 77);
    CHECK(records[0].label == Label::malicious);
}

TEST_CASE("group_flows merges by key and sorts timestamps") {
    const FlowKey a = key_a();
    FlowKey b = a;
    b.src_port = 6000;
    const std::vector<PacketRecord> records = {
        {a, 500, Label::benign}, {a, 100, Label::benign}, {b, 50, Label::malicious}};
    const auto flows = group_flows(records);
    REQUIRE(flows.size() == 2);
    CHECK(flows.at(a).packets_us == std::vector<std::int64_t>{100, 500});
    CHECK(flows.at(a).label == Label::benign);
    CHECK(flows.at(b).packet_count() == 1);
    CHECK(flows.at(b).label == Label::malicious);
}

TEST_CASE("group_flows raises LabelConflict on mixed labels for one key") {
    const FlowKey a = key_a();
    const std::vector<PacketRecord> records = {{a, 1, Label::benign}, {a, 2, Label::malicious}};
    CHECK_THROWS_AS(group_flows(records), LabelConflict);
}

TEST_CASE("group_flows is order-insensitive and conserves packets") {
    SynthParams params;
    params.flow_count = 50;
    params.malicious_ratio = 9;
    params.seed = 7;
    auto records = generate_synthetic(params);
    const auto flows = group_flows(records);

    std::size_t total = 0;
    for (const auto& [key, trace] : flows) {
        total += trace.packet_count();
        CHECK(std::is_sorted(trace.packets_us.begin(), trace.packets_us.end()));
    }
    CHECK(total == records.size());

    std::shuffle(records.begin(), records.end(), std::mt19937_64{123});
    const auto reshuffled = group_flows(records);
    REQUIRE(reshuffled.size() == flows.size());
    for (const auto& [key, trace] : flows) {
        CHECK(reshuffled.at(key).packets_us == trace.packets_us);
        CHECK(reshuffled.at(key).label == trace.label);
    }
}

TEST_CASE("summarize counts labels and spans all packets") {
    const FlowKey a = key_a();
    FlowKey b = a;
    b.src_port = 6000;

    SUBCASE("single flow, one packet has zero span") {
        const std::vector<PacketRecord> records = {{a, 42, Label::benign}};
        const auto s = summarize(group_flows(records));
        CHECK(s.benign_flows == 1);
        CHECK(s.malicious_flows == 0);
        CHECK(s.span_s == 0.0);
    }
    SUBCASE("two flows spanning five seconds") {
        const std::vector<PacketRecord> records = {{a, 0, Label::benign},
                                                   {b, 5'000'000, Label::malicious}};
        const auto s = summarize(group_flows(records));
        CHECK(s.benign_flows == 1);
        CHECK(s.malicious_flows == 1);
        CHECK(s.span_s == doctest::Approx(5.0));
    }
    SUBCASE("empty input is a zero summary") {
        const auto s = summarize({});
        CHECK(s.benign_flows == 0);
        CHECK(s.malicious_flows == 0);
        CHECK(s.span_s == 0.0);
    }
}

TEST_CASE("serialize/parse round-trip is field exact") {
    SynthParams params;
    params.flow_count = 40;
    params.malicious_ratio = 3;
    params.seed = 99;
    const auto records = generate_synthetic(params);

    std::ostringstream out;
    serialize_trace(out, records);
    const auto reparsed = parse(out.str());
    REQUIRE(reparsed.size() == records.size());
    CHECK(reparsed == records);

    // and a second serialization is byte-identical
    std::ostringstream again;
    serialize_trace(again, reparsed);
    CHECK(again.str() == out.str());
}

TEST_CASE("synthetic generator is deterministic and honors the label ratio") {
    SynthParams params;
    params.flow_count = 1000;
    params.malicious_ratio = 625;
    params.seed = 5;
    const auto a = generate_synthetic(params);
    const auto b = generate_synthetic(params);
    CHECK(a == b);

    const auto summary = summarize(group_flows(a));
    CHECK(summary.benign_flows + summary.malicious_flows == 1000);
    CHECK(summary.malicious_flows == 2); // round(1000 / 626)

    params.flow_count = 0;
    CHECK(generate_synthetic(params).empty());
}

TEST_SUITE_END();
