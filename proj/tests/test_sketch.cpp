#include <doctest.h>

#include <cmath>
#include <sstream>

#include "revealnet/errors.hpp"
#include "revealnet/rng.hpp"
#include "revealnet/sketch.hpp"
#include "revealnet/tam.hpp"

using namespace revealnet;

namespace {

// the 2x4 +/-1 matrix used by the worked examples
ProjectionMatrix hand_matrix() {
    ProjectionMatrix m;
    m.kind = MatrixKind::bernoulli;
    m.m = 2;
    m.n = 4;
    m.seed = 0;
    m.scale = 1;
    m.entries = {1, -1, 1, -1, 1, 1, -1, -1};
    return m;
}

IntSketch fold_updates(const ProjectionMatrix& m, const std::vector<std::size_t>& bins) {
    IntSketch s = zero_sketch(m.m);
    for (auto b : bins)
        sketch_update(s, m, b);
    return s;
}

} // namespace

TEST_SUITE_BEGIN("sketch");

TEST_CASE("tam bin indexing: boundaries, horizon, negative offsets") {
    const auto cfg = TamConfig::from_horizon(100'000, 61'000'000); // t=0.1s
    CHECK(cfg.n == 610);
    CHECK(tam_bin_index(cfg, 0, 0) == 0);
    CHECK(tam_bin_index(cfg, 0, 99'999) == 0);
    CHECK(tam_bin_index(cfg, 0, 100'000) == 1);
    CHECK_THROWS_AS(tam_bin_index(cfg, 10, 5), NegativeOffset);

    const auto one_sec = TamConfig::from_horizon(1'000'000, 61'000'000); // t=1s, T=61s
    CHECK(one_sec.n == 61);
    CHECK_FALSE(tam_bin_index(one_sec, 0, 61'500'000).has_value()); // out of horizon
    CHECK(tam_bin_index(one_sec, 0, 60'999'999).has_value());
}

TEST_CASE("tam config derives n by ceiling division") {
    CHECK(TamConfig::from_horizon(100'000, 61'010'000).n == 611);
    CHECK(TamConfig::from_horizon(1'000'000, 61'010'000).n == 62);
    CHECK(TamConfig::from_bins(100'000, 716).horizon_us == 71'600'000);
    CHECK_THROWS_AS(TamConfig::from_horizon(0, 1), ConfigError);
    CHECK_THROWS_AS(TamConfig::from_horizon(1000, 10), ConfigError);
}

TEST_CASE("build_tam counts packets per bin and ignores the post-horizon tail") {
    const auto cfg = TamConfig::from_bins(100'000, 4);
    const std::vector<std::int64_t> ts = {1'000, 1'500, 250'000, 350'000,
                                          399'999, 350'001, 2'000'000};
    const auto tam = build_tam(cfg, ts);
    CHECK(tam.anchor_us == 1'000);
    CHECK(tam.counts == std::vector<std::uint32_t>{2, 0, 1, 3}); // last packet out of horizon
}

TEST_CASE("gen_matrix: bernoulli domain and determinism") {
    const auto m = gen_matrix(MatrixKind::bernoulli, 4, 2, 77);
    REQUIRE(m.entries.size() == 8);
    for (auto e : m.entries)
        CHECK((e == 1 || e == -1));
    CHECK(gen_matrix(MatrixKind::bernoulli, 4, 2, 77).entries == m.entries);
    CHECK(gen_matrix(MatrixKind::bernoulli, 4, 2, 78).entries != m.entries);
}

TEST_CASE("gen_matrix: entry (i,j) depends only on (seed, i, j)") {
    const auto small = gen_matrix(MatrixKind::scaled_gaussian, 8, 3, 5, 10'000);
    const auto large = gen_matrix(MatrixKind::scaled_gaussian, 20, 7, 5, 10'000);
    for (std::size_t i = 0; i < small.m; ++i)
        for (std::size_t j = 0; j < small.n; ++j)
            CHECK(small.at(i, j) == large.at(i, j));
}

TEST_CASE("gen_matrix: scaled gaussian statistics at n*m >= 1000") {
    const auto m = gen_matrix(MatrixKind::scaled_gaussian, 1000, 10, 1234, 10'000);
    long double sum = 0, sq = 0;
    for (auto e : m.entries) {
        sum += e;
        sq += static_cast<long double>(e) * e;
    }
    const double count = static_cast<double>(m.entries.size());
    const double mean = static_cast<double>(sum) / count;
    const double stddev = std::sqrt(static_cast<double>(sq) / count - mean * mean);
    CHECK(std::abs(mean) / 10'000.0 <= 0.05);
    CHECK(stddev >= 9'000.0);
    CHECK(stddev <= 11'000.0);
}

TEST_CASE("sketch_update applies one matrix column per packet") {
    const auto m = hand_matrix();
    SUBCASE("single update with bin 0") {
        const auto s = fold_updates(m, {0});
        CHECK(s.values == std::vector<std::int64_t>{1, 1});
    }
    SUBCASE("bins {0,0,2,3,3,3} equal the hand product M*[2,0,1,3]") {
        const auto s = fold_updates(m, {0, 0, 2, 3, 3, 3});
        CHECK(s.values == std::vector<std::int64_t>{0, -2});
    }
    SUBCASE("no updates leave the zero sketch") {
        CHECK(fold_updates(m, {}).values == std::vector<std::int64_t>{0, 0});
    }
    SUBCASE("errors") {
        IntSketch s = zero_sketch(2);
        CHECK_THROWS_AS(sketch_update(s, m, 4), IndexOutOfRange);
        IntSketch wrong = zero_sketch(3);
        CHECK_THROWS_AS(sketch_update(wrong, m, 0), DimensionMismatch);
    }
}

TEST_CASE("sketch_from_tam is the exact integer product") {
    const auto m = hand_matrix();
    TamVector tam;
    tam.counts = {2, 0, 1, 3};
    CHECK(sketch_from_tam(m, tam).values == std::vector<std::int64_t>{0, -2});

    tam.counts = {0, 0, 0, 0};
    CHECK(sketch_from_tam(m, tam).values == std::vector<std::int64_t>{0, 0});

    tam.counts = {1, 2, 3};
    CHECK_THROWS_AS(sketch_from_tam(m, tam), DimensionMismatch);
}

TEST_CASE("online fold equals offline product on seeded random streams") {
    // unit-scale version of the full linearity gate
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        Xoshiro256pp rng(stream_seed(4242, trial));
        const std::size_t n = 2 + rng.next() % 715;
        const std::size_t m_len = 5 * (1 + rng.next() % 3);
        const auto kind = (rng.next() & 1) ? MatrixKind::bernoulli : MatrixKind::scaled_gaussian;
        const auto matrix = gen_matrix(kind, n, m_len, rng.next(), 10'000);
        const auto cfg = TamConfig::from_bins(1'000, n);

        const std::size_t packets = 1 + rng.next() % 200;
        std::vector<std::int64_t> ts;
        ts.push_back(static_cast<std::int64_t>(rng.next() % 1'000'000));
        for (std::size_t p = 1; p < packets; ++p)
            ts.push_back(ts.front() + static_cast<std::int64_t>(
                                          rng.next() % (cfg.horizon_us > 1 ? cfg.horizon_us : 1)));
        std::sort(ts.begin(), ts.end());

        const auto tam = build_tam(cfg, ts);
        IntSketch online = zero_sketch(m_len);
        for (auto t : ts)
            if (auto bin = tam_bin_index(cfg, tam.anchor_us, t))
                sketch_update(online, matrix, *bin);
        CHECK(online == sketch_from_tam(matrix, tam));
    }
}

TEST_CASE("permutation of packets within bins leaves the sketch unchanged") {
    const auto matrix = gen_matrix(MatrixKind::bernoulli, 16, 10, 9);
    const std::vector<std::size_t> bins = {0, 3, 3, 7, 15, 1, 0};
    std::vector<std::size_t> shuffled = {15, 0, 3, 1, 7, 0, 3};
    CHECK(fold_updates(matrix, bins) == fold_updates(matrix, shuffled));
}

TEST_CASE("binarize: sign rule with zero mapping to one") {
    CHECK(binarize(IntSketch{{0, -2}}).bits == std::vector<std::uint8_t>{1, 0});
    CHECK(binarize(IntSketch{{0, 0, 0}}).bits == std::vector<std::uint8_t>{1, 1, 1});
    CHECK(binarize(IntSketch{{-1, 5, -3}}).bits == std::vector<std::uint8_t>{0, 1, 0});
}

TEST_CASE("binary sketch packs to exactly ceil(m/8) bytes, MSB first") {
    BinSketch s;
    s.bits = {1, 0, 1, 1, 0, 0, 0, 1, 1, 0};
    const auto packed = s.packed();
    REQUIRE(packed.size() == 2);
    CHECK(packed[0] == 0xb1);
    CHECK(packed[1] == 0x80);
}

TEST_CASE("hamming distances") {
    CHECK(hamming(BinSketch{{1, 0}}, BinSketch{{1, 0}}) == 0);
    CHECK(hamming(BinSketch{{1, 0, 1}}, BinSketch{{0, 0, 1}}) == 1);
    CHECK_THROWS_AS(hamming(BinSketch{{1}}, BinSketch{{1, 0}}), DimensionMismatch);

    CHECK(hamming(IntSketch{{5, -2, 0}}, IntSketch{{5, -2, 0}}) == 0);
    CHECK(hamming(IntSketch{{5, -2, 0}}, IntSketch{{5, 2, 0}}) == 1);

    TamVector a, b;
    a.counts = {2, 0, 1};
    b.counts = {2, 1, 1};
    CHECK(hamming(a, b) == 1);
}

TEST_CASE("cosine exact match in pure integer arithmetic") {
    using V = std::vector<std::int64_t>;
    CHECK(cosine_exact_match(IntSketch{V{0, -2}}, IntSketch{V{0, -4}}));  // parallel
    CHECK_FALSE(cosine_exact_match(IntSketch{V{1, 0}}, IntSketch{V{0, 1}}));   // orthogonal
    CHECK_FALSE(cosine_exact_match(IntSketch{V{1, 2}}, IntSketch{V{-1, -2}})); // anti-parallel
    CHECK(cosine_exact_match(IntSketch{V{3, 6, 9}}, IntSketch{V{1, 2, 3}}));
    CHECK_FALSE(cosine_exact_match(IntSketch{V{3, 6, 9}}, IntSketch{V{1, 2, 4}}));
    CHECK_FALSE(cosine_exact_match(IntSketch{V{0, 0}}, IntSketch{V{0, 1}})); // zero has no direction
    CHECK_THROWS_AS(cosine_exact_match(IntSketch{V{0, 0}}, IntSketch{V{0, 0}}), BothZero);

    // near-parallel at magnitudes where doubles would round to cos == 1
    const std::int64_t big = 3'037'000'000;
    CHECK(cosine_exact_match(IntSketch{V{big, big}}, IntSketch{V{big, big}}));
    CHECK_FALSE(cosine_exact_match(IntSketch{V{big, big}}, IntSketch{V{big, big - 1}}));
}

TEST_CASE("cosine score for the relaxed mode") {
    using V = std::vector<std::int64_t>;
    CHECK(cosine_score(IntSketch{V{2, 4}}, IntSketch{V{1, 2}}) == doctest::Approx(1.0));
    CHECK(cosine_score(IntSketch{V{1, 0}}, IntSketch{V{0, 1}}) == doctest::Approx(0.0));
    CHECK(cosine_score(IntSketch{V{3, 4}}, IntSketch{V{4, 3}}) == doctest::Approx(0.96));
    CHECK_THROWS_AS(cosine_score(IntSketch{V{0}}, IntSketch{V{0}}), BothZero);
}

TEST_CASE("exact-match consistency: equal inputs always match") {
    const auto matrix = gen_matrix(MatrixKind::scaled_gaussian, 64, 10, 31337, 10'000);
    const auto cfg = TamConfig::from_bins(100'000, 64);
    Xoshiro256pp rng(5);
    std::vector<std::int64_t> ts = {0};
    for (int i = 0; i < 50; ++i)
        ts.push_back(static_cast<std::int64_t>(rng.next() % cfg.horizon_us));
    std::sort(ts.begin(), ts.end());
    const auto f = build_tam(cfg, ts);
    const auto sf = sketch_from_tam(matrix, f);
    CHECK(hamming(binarize(sf), binarize(sf)) == 0);
    CHECK(cosine_exact_match(sf, sf));
}

TEST_CASE("matrix serialization round-trips and distributes identically") {
    const auto m = gen_matrix(MatrixKind::scaled_gaussian, 37, 10, 99, 10'000);
    std::stringstream buf;
    serialize_matrix(buf, m);
    CHECK(buf.str().size() == 28 + 4 * m.entries.size()); // header + 32-bit BE entries
    const auto back = deserialize_matrix(buf);
    CHECK(back.kind == m.kind);
    CHECK(back.n == m.n);
    CHECK(back.m == m.m);
    CHECK(back.seed == m.seed);
    CHECK(back.scale == m.scale);
    CHECK(back.entries == m.entries);
}

TEST_SUITE_END();
