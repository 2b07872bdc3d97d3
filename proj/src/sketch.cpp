#include "revealnet/sketch.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>

#include "revealnet/errors.hpp"
#include "revealnet/rng.hpp"

namespace revealnet {

namespace {

// distinct odd constants for the row/column lanes of the per-cell hash
constexpr std::uint64_t kRowSalt = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kColSalt = 0xc2b2ae3d27d4eb4fULL;

std::uint64_t cell_hash(std::uint64_t seed, std::uint64_t i, std::uint64_t j,
                        std::uint64_t lane) {
    std::uint64_t h = mix64(seed ^ (i + 1) * kRowSalt);
    h = mix64(h ^ (j + 1) * kColSalt);
    return mix64(h + lane);
}

double to_unit_interval(std::uint64_t word) {
    return static_cast<double>((word >> 11) + 1) * 0x1.0p-53; // (0, 1]
}

std::int32_t gaussian_entry(std::uint64_t seed, std::uint64_t i, std::uint64_t j,
                            std::int32_t scale) {
    const double u1 = to_unit_interval(cell_hash(seed, i, j, 0));
    const double u2 = to_unit_interval(cell_hash(seed, i, j, 1));
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    const double scaled = z * static_cast<double>(scale);
    const double clamped =
        std::clamp(scaled, static_cast<double>(std::numeric_limits<std::int32_t>::min()),
                   static_cast<double>(std::numeric_limits<std::int32_t>::max()));
    return static_cast<std::int32_t>(std::llround(clamped)); // llround: half away from zero
}

// 192-bit unsigned accumulator; enough headroom for any sum of i64*i64
// products at realistic sketch lengths
struct Acc192 {
    unsigned __int128 lo = 0;
    std::uint64_t hi = 0;

    void add(unsigned __int128 v) {
        const unsigned __int128 before = lo;
        lo += v;
        if (lo < before)
            ++hi;
    }

    friend bool operator>(const Acc192& a, const Acc192& b) {
        return a.hi != b.hi ? a.hi > b.hi : a.lo > b.lo;
    }
};

bool all_zero(std::span<const std::int64_t> v) {
    for (auto x : v)
        if (x != 0)
            return false;
    return true;
}

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b)
        throw DimensionMismatch("vector lengths differ: " + std::to_string(a) + " vs " +
                                std::to_string(b));
}

std::vector<std::int64_t> widen(const TamVector& tam) {
    return {tam.counts.begin(), tam.counts.end()};
}

void put_u32_be(std::ostream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                           static_cast<char>(v >> 8), static_cast<char>(v)};
    out.write(bytes, 4);
}

void put_u64_be(std::ostream& out, std::uint64_t v) {
    put_u32_be(out, static_cast<std::uint32_t>(v >> 32));
    put_u32_be(out, static_cast<std::uint32_t>(v));
}

std::uint32_t get_u32_be(std::istream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    if (!in)
        throw Error("truncated matrix stream");
    return (std::uint32_t{bytes[0]} << 24) | (std::uint32_t{bytes[1]} << 16) |
           (std::uint32_t{bytes[2]} << 8) | std::uint32_t{bytes[3]};
}

std::uint64_t get_u64_be(std::istream& in) {
    const std::uint64_t hi = get_u32_be(in);
    return (hi << 32) | get_u32_be(in);
}

constexpr std::uint32_t kMatrixMagic = 0x524e504dU; // "RNPM"

} // namespace

ProjectionMatrix gen_matrix(MatrixKind kind, std::size_t n, std::size_t m, std::uint64_t seed,
                            std::int32_t scale) {
    if (n < 1 || m < 1)
        throw ConfigError("gen_matrix: n and m must be >= 1");
    if (kind == MatrixKind::bernoulli)
        scale = 1;
    if (scale < 1)
        throw ConfigError("gen_matrix: scale must be >= 1");

    ProjectionMatrix matrix{kind, m, n, seed, scale, {}};
    matrix.entries.resize(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            matrix.entries[i * n + j] =
                kind == MatrixKind::bernoulli
                    ? ((cell_hash(seed, i, j, 0) >> 63) ? 1 : -1)
                    : gaussian_entry(seed, i, j, scale);
        }
    }
    return matrix;
}

std::vector<std::uint8_t> BinSketch::packed() const {
    std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i])
            out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    return out;
}

void sketch_update(IntSketch& sketch, const ProjectionMatrix& matrix, std::size_t bin) {
    require_same_length(sketch.values.size(), matrix.m);
    if (bin >= matrix.n)
        throw IndexOutOfRange("bin " + std::to_string(bin) + " >= n " +
                              std::to_string(matrix.n));
    for (std::size_t i = 0; i < matrix.m; ++i)
        sketch.values[i] += matrix.at(i, bin);
}

IntSketch sketch_from_tam(const ProjectionMatrix& matrix, const TamVector& tam) {
    require_same_length(matrix.n, tam.counts.size());
    IntSketch sketch = zero_sketch(matrix.m);
    for (std::size_t i = 0; i < matrix.m; ++i) {
        std::int64_t acc = 0;
        const auto row = matrix.row(i);
        for (std::size_t j = 0; j < matrix.n; ++j)
            acc += static_cast<std::int64_t>(row[j]) * tam.counts[j];
        sketch.values[i] = acc;
    }
    return sketch;
}

BinSketch binarize(const IntSketch& sketch) {
    BinSketch out;
    out.bits.reserve(sketch.values.size());
    for (auto v : sketch.values)
        out.bits.push_back(v >= 0 ? 1 : 0); // 0 maps to bit 1
    return out;
}

std::size_t hamming(const BinSketch& a, const BinSketch& b) {
    require_same_length(a.bits.size(), b.bits.size());
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i)
        d += a.bits[i] != b.bits[i];
    return d;
}

std::size_t hamming(const IntSketch& a, const IntSketch& b) {
    require_same_length(a.values.size(), b.values.size());
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        d += a.values[i] != b.values[i];
    return d;
}

std::size_t hamming(const TamVector& a, const TamVector& b) {
    require_same_length(a.counts.size(), b.counts.size());
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.counts.size(); ++i)
        d += a.counts[i] != b.counts[i];
    return d;
}

bool cosine_exact_match(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    require_same_length(a.size(), b.size());
    const bool za = all_zero(a), zb = all_zero(b);
    if (za && zb)
        throw BothZero("cosine undefined for two zero vectors");
    if (za || zb)
        return false;

    // sign of the dot product, exactly: positive and negative partial sums
    Acc192 pos, neg;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const __int128 p = static_cast<__int128>(a[i]) * b[i];
        if (p >= 0)
            pos.add(static_cast<unsigned __int128>(p));
        else
            neg.add(static_cast<unsigned __int128>(-p));
    }
    if (!(pos > neg))
        return false; // dot <= 0

    // Lagrange identity: equality in Cauchy-Schwarz iff every 2x2 minor is 0
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const __int128 lhs = static_cast<__int128>(a[i]) * b[j];
            const __int128 rhs = static_cast<__int128>(a[j]) * b[i];
            if (lhs != rhs)
                return false;
        }
    }
    return true;
}

bool cosine_exact_match(const IntSketch& a, const IntSketch& b) {
    return cosine_exact_match(std::span<const std::int64_t>(a.values),
                              std::span<const std::int64_t>(b.values));
}

bool cosine_exact_match(const TamVector& a, const TamVector& b) {
    const auto wa = widen(a), wb = widen(b);
    return cosine_exact_match(std::span<const std::int64_t>(wa),
                              std::span<const std::int64_t>(wb));
}

double cosine_score(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    require_same_length(a.size(), b.size());
    if (all_zero(a) && all_zero(b))
        throw BothZero("cosine undefined for two zero vectors");
    long double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<long double>(a[i]) * b[i];
        na += static_cast<long double>(a[i]) * a[i];
        nb += static_cast<long double>(b[i]) * b[i];
    }
    if (na == 0 || nb == 0)
        return 0.0;
    return static_cast<double>(dot / (std::sqrt(na) * std::sqrt(nb)));
}

double cosine_score(const IntSketch& a, const IntSketch& b) {
    return cosine_score(std::span<const std::int64_t>(a.values),
                        std::span<const std::int64_t>(b.values));
}

double cosine_score(const TamVector& a, const TamVector& b) {
    const auto wa = widen(a), wb = widen(b);
    return cosine_score(std::span<const std::int64_t>(wa), std::span<const std::int64_t>(wb));
}

void serialize_matrix(std::ostream& out, const ProjectionMatrix& matrix) {
    put_u32_be(out, kMatrixMagic);
    put_u32_be(out, static_cast<std::uint32_t>(matrix.kind));
    put_u32_be(out, static_cast<std::uint32_t>(matrix.n));
    put_u32_be(out, static_cast<std::uint32_t>(matrix.m));
    put_u64_be(out, matrix.seed);
    put_u32_be(out, static_cast<std::uint32_t>(matrix.scale));
    for (auto e : matrix.entries)
        put_u32_be(out, static_cast<std::uint32_t>(e));
}

ProjectionMatrix deserialize_matrix(std::istream& in) {
    if (get_u32_be(in) != kMatrixMagic)
        throw Error("bad matrix magic");
    ProjectionMatrix matrix;
    const auto kind = get_u32_be(in);
    if (kind > 1)
        throw Error("bad matrix kind");
    matrix.kind = static_cast<MatrixKind>(kind);
    matrix.n = get_u32_be(in);
    matrix.m = get_u32_be(in);
    matrix.seed = get_u64_be(in);
    matrix.scale = static_cast<std::int32_t>(get_u32_be(in));
    matrix.entries.resize(matrix.m * matrix.n);
    for (auto& e : matrix.entries)
        e = static_cast<std::int32_t>(get_u32_be(in));
    return matrix;
}

} // namespace revealnet
