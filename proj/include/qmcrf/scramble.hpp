#pragma once

#include <cmath>
#include <cstdint>

#include "qmcrf/point_set.hpp"
#include "qmcrf/rng.hpp"

namespace qmcrf {

namespace detail {

// Randomizations operate on the leading `depth` base-2 digits of each
// coordinate; outputs land on the 2^-depth lattice. With depth 53 the full
// double mantissa is filled.
inline std::uint64_t to_digits(double u, int depth) {
    return static_cast<std::uint64_t>(std::ldexp(u, depth));
}

inline double from_digits(std::uint64_t a, int depth) {
    return std::ldexp(static_cast<double>(a), -depth);
}

// One nested-uniform-scrambled coordinate. The permutation bit applied at
// digit depth k is a hash of (seed, dimension, the k-digit prefix), so the
// exponential permutation tree is realized lazily: nodes agree whenever
// prefixes agree, which is exactly Owen's nested uniform scramble with the
// permutations driven by the hash. The prefix is tagged with a marker bit
// so distinct depths can never collide.
inline double owen_scramble_coord(double u, std::uint64_t dim_salt, int depth) {
    const std::uint64_t a = to_digits(u, depth);
    std::uint64_t c = 0;
    for (int k = 0; k < depth; ++k) {
        const std::uint64_t prefix = (a >> (depth - k)) | (1ull << k);
        const std::uint64_t flip = rng::splitmix64(prefix ^ dim_salt) & 1ull;
        const std::uint64_t digit = (a >> (depth - 1 - k)) & 1ull;
        c = (c << 1) | (digit ^ flip);
    }
    return from_digits(c, depth);
}

inline std::uint64_t owen_dim_salt(std::uint64_t seed, Eigen::Index dim) {
    return rng::hash_combine(rng::splitmix64(seed), static_cast<std::uint64_t>(dim) + 0x51ull);
}

} // namespace detail

// Owen nested uniform scramble of a base-2 digital net. Each output
// coordinate is marginally Unif[0,1) over the seed, and elementary-interval
// balance is preserved exactly for the input's (t,m,s) parameters because
// digits at depth k are permuted conditionally on the digit prefix.
inline PointSet owen_scramble(const PointSet& ps, const ScrambleSpec& spec) {
    if (spec.kind == ScrambleKind::none) return ps;
    if (spec.kind != ScrambleKind::owen_nested)
        throw config_error("owen_scramble requires kind owen_nested (or none)");
    if (spec.digit_depth < 1 || spec.digit_depth > 53)
        throw config_error("digit_depth out of [1,53]");

    PointSet out;
    out.points.resize(ps.count(), ps.dim());
    out.meta = ps.meta;
    out.meta.scramble = ScrambleKind::owen_nested;
    out.meta.seed = spec.seed;
    for (Eigen::Index j = 0; j < ps.dim(); ++j) {
        const std::uint64_t salt = detail::owen_dim_salt(spec.seed, j);
        for (Eigen::Index i = 0; i < ps.count(); ++i)
            out.points(i, j) = detail::owen_scramble_coord(ps.points(i, j), salt, spec.digit_depth);
    }
    return out;
}

// Cranley-Patterson rotation: one uniform shift per dimension, added modulo
// 1. Carried out on the 2^-53 digit lattice so that within-column pairwise
// circular differences are preserved exactly.
inline PointSet cp_rotate(const PointSet& ps, std::uint64_t seed) {
    constexpr int depth = 53;
    rng::Stream stream(rng::derive_seed(seed, {0xC9ull}));
    PointSet out;
    out.points.resize(ps.count(), ps.dim());
    out.meta = ps.meta;
    out.meta.scramble = ScrambleKind::cp_rotation;
    out.meta.seed = seed;
    const std::uint64_t mod = 1ull << depth;
    for (Eigen::Index j = 0; j < ps.dim(); ++j) {
        const std::uint64_t shift = stream.next_u64() >> (64 - depth);
        for (Eigen::Index i = 0; i < ps.count(); ++i) {
            const std::uint64_t a = detail::to_digits(ps.points(i, j), depth);
            out.points(i, j) = detail::from_digits((a + shift) & (mod - 1), depth);
        }
    }
    return out;
}

// Dispatch used by the samplers and the CLI.
inline PointSet apply_scramble(const PointSet& ps, const ScrambleSpec& spec) {
    switch (spec.kind) {
        case ScrambleKind::none: return ps;
        case ScrambleKind::owen_nested: return owen_scramble(ps, spec);
        case ScrambleKind::cp_rotation: return cp_rotate(ps, spec.seed);
    }
    throw config_error("unknown scramble kind");
}

} // namespace qmcrf
