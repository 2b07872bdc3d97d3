#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "revealnet/tam.hpp"

namespace revealnet {

enum class MatrixKind : std::uint8_t { bernoulli = 0, scaled_gaussian = 1 };

inline constexpr std::int32_t kDefaultGaussianScale = 10'000;

/// m x n integer random projection shared by every switch in a deployment.
/// bernoulli entries are +/-1 with equal probability; scaled_gaussian entries
/// are round(scale * g) for g ~ N(0,1), rounding half away from zero.
/// Entry (i, j) is a pure function of (seed, i, j), so the same seed yields
/// the same entries at any matrix size.
struct ProjectionMatrix {
    MatrixKind kind = MatrixKind::bernoulli;
    std::size_t m = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::int32_t scale = 1;
    std::vector<std::int32_t> entries; // row-major m x n

    std::int32_t at(std::size_t row, std::size_t col) const { return entries[row * n + col]; }
    std::span<const std::int32_t> row(std::size_t r) const { return {entries.data() + r * n, n}; }
};

ProjectionMatrix gen_matrix(MatrixKind kind, std::size_t n, std::size_t m, std::uint64_t seed,
                            std::int32_t scale = kDefaultGaussianScale);

/// Exact integer sketch Phi * f. Accumulators are 64-bit so no realistic
/// flow can overflow them; storage accounting still charges 32 bits per
/// element (see accounting module).
struct IntSketch {
    std::vector<std::int64_t> values;

    bool operator==(const IntSketch&) const = default;
};

inline IntSketch zero_sketch(std::size_t m) {
    return IntSketch{std::vector<std::int64_t>(m, 0)};
}

/// Sign pattern of an IntSketch; bit i is 1 iff values[i] >= 0.
struct BinSketch {
    std::vector<std::uint8_t> bits; // one 0/1 byte per position

    bool operator==(const BinSketch&) const = default;

    /// MSB-first packing, m bits in ceil(m/8) bytes
    std::vector<std::uint8_t> packed() const;
};

/// Per-packet online update: add column `bin` of the matrix into the sketch.
/// This is the whole data-plane cost of sketch maintenance.
void sketch_update(IntSketch& sketch, const ProjectionMatrix& matrix, std::size_t bin);

/// Offline oracle for the online path: the exact product Phi * f.
IntSketch sketch_from_tam(const ProjectionMatrix& matrix, const TamVector& tam);

BinSketch binarize(const IntSketch& sketch);

// hamming distance: bit disagreements for binary sketches, count of unequal
// positions for integer vectors
std::size_t hamming(const BinSketch& a, const BinSketch& b);
std::size_t hamming(const IntSketch& a, const IntSketch& b);
std::size_t hamming(const TamVector& a, const TamVector& b);

/// True iff cos(a, b) == 1 exactly: dot(a, b) > 0 and dot^2 == |a|^2 |b|^2.
/// Evaluated purely in integer arithmetic via Lagrange's identity
/// (|a|^2 |b|^2 - dot^2 == sum of squared 2x2 cross terms), so no rounding
/// is involved. Throws BothZero when both vectors are all-zero.
bool cosine_exact_match(std::span<const std::int64_t> a, std::span<const std::int64_t> b);
bool cosine_exact_match(const IntSketch& a, const IntSketch& b);
bool cosine_exact_match(const TamVector& a, const TamVector& b);

/// dot / (|a| |b|) as a double; only the relaxed-threshold experiment mode
/// uses this.
double cosine_score(std::span<const std::int64_t> a, std::span<const std::int64_t> b);
double cosine_score(const IntSketch& a, const IntSketch& b);
double cosine_score(const TamVector& a, const TamVector& b);

// matrix wire form: magic, kind, n, m, seed, scale header then row-major
// 32-bit big-endian entries; the orchestrator ships this to every switch
void serialize_matrix(std::ostream& out, const ProjectionMatrix& matrix);
ProjectionMatrix deserialize_matrix(std::istream& in);

inline std::uint64_t matrix_wire_bits(const ProjectionMatrix& m) {
    return 32ull * m.m * m.n;
}

} // namespace revealnet
