#pragma once

#include <array>
#include <cstdint>

#include "qmcrf/point_set.hpp"

namespace qmcrf {

namespace detail {

// Direction-number initialisation data for the first 32 Sobol' dimensions,
// from the Joe & Kuo table (new-joe-kuo-6, "Constructing Sobol sequences
// with better two-dimensional projections", SISC 2008). `poly` holds the
// primitive polynomial over GF(2) including leading and trailing 1 bits;
// `m` holds the free initial direction integers (m_k odd, m_k < 2^k).
// Dimension 1 is the van der Corput sequence (identity generator matrix).
struct SobolDim {
    std::uint32_t poly;
    int degree;
    std::array<std::uint32_t, 7> m;
};

inline constexpr int kSobolMaxDim = 32;
inline constexpr int kSobolBits = 32;

inline constexpr std::array<SobolDim, kSobolMaxDim> kSobolTable = {{
    {1u, 0, {}},
    {3u, 1, {1}},
    {7u, 2, {1, 3}},
    {11u, 3, {1, 3, 1}},
    {13u, 3, {1, 1, 1}},
    {19u, 4, {1, 1, 3, 3}},
    {25u, 4, {1, 3, 5, 13}},
    {37u, 5, {1, 1, 5, 5, 17}},
    {41u, 5, {1, 1, 5, 5, 5}},
    {47u, 5, {1, 1, 7, 11, 19}},
    {55u, 5, {1, 1, 5, 1, 1}},
    {59u, 5, {1, 1, 1, 3, 11}},
    {61u, 5, {1, 3, 5, 5, 31}},
    {67u, 6, {1, 3, 3, 9, 7, 49}},
    {91u, 6, {1, 1, 1, 15, 21, 21}},
    {97u, 6, {1, 3, 1, 13, 27, 49}},
    {103u, 6, {1, 1, 1, 15, 7, 5}},
    {109u, 6, {1, 3, 1, 15, 13, 25}},
    {115u, 6, {1, 1, 5, 5, 19, 61}},
    {131u, 7, {1, 3, 7, 11, 23, 15, 103}},
    {137u, 7, {1, 3, 7, 13, 13, 15, 69}},
    {143u, 7, {1, 1, 3, 13, 7, 35, 63}},
    {145u, 7, {1, 3, 5, 9, 1, 25, 53}},
    {157u, 7, {1, 3, 1, 13, 9, 35, 107}},
    {167u, 7, {1, 3, 1, 5, 27, 61, 31}},
    {171u, 7, {1, 1, 5, 11, 19, 41, 61}},
    {185u, 7, {1, 3, 5, 3, 3, 13, 69}},
    {191u, 7, {1, 1, 7, 13, 1, 19, 1}},
    {193u, 7, {1, 3, 7, 5, 13, 19, 59}},
    {203u, 7, {1, 1, 3, 9, 25, 29, 41}},
    {211u, 7, {1, 3, 5, 13, 23, 1, 55}},
    {213u, 7, {1, 3, 7, 3, 13, 59, 17}},
}};

// Direction numbers v_k = m_k * 2^(kSobolBits - k), extended past the table
// with the standard recurrence driven by the primitive polynomial.
inline std::array<std::uint32_t, kSobolBits> sobol_direction_numbers(int dim) {
    std::array<std::uint32_t, kSobolBits> v{};
    if (dim == 0) {
        for (int k = 0; k < kSobolBits; ++k) v[k] = 1u << (kSobolBits - 1 - k);
        return v;
    }
    const SobolDim& row = kSobolTable[static_cast<std::size_t>(dim)];
    const int s = row.degree;
    for (int k = 0; k < kSobolBits; ++k) {
        if (k < s) {
            v[k] = row.m[static_cast<std::size_t>(k)] << (kSobolBits - 1 - k);
        } else {
            std::uint32_t x = v[k - s] ^ (v[k - s] >> s);
            for (int i = 1; i < s; ++i)
                if ((row.poly >> (s - i)) & 1u) x ^= v[k - i];
            v[k] = x;
        }
    }
    return v;
}

} // namespace detail

// The 2^m consecutive Sobol' points starting at index_offset, in natural
// index order: point n is the XOR of the direction numbers selected by the
// binary digits of n, so the first 2^m points of each dimension block form
// a digital net for every m. Coordinates are multiples of 2^-32.
inline PointSet sobol_points(int m, int s, std::uint64_t index_offset = 0) {
    if (s < 1 || s > detail::kSobolMaxDim)
        throw config_error("sobol dimension exceeds direction-number table (max " +
                           std::to_string(detail::kSobolMaxDim) + ")");
    if (m < 0 || m > 31) throw config_error("sobol m out of range [0,31]");
    const std::uint64_t count = 1ull << m;
    if (index_offset + count > (1ull << 31)) throw config_error("sobol index range exceeds 2^31");

    PointSet ps;
    ps.points.resize(static_cast<Eigen::Index>(count), s);
    ps.meta = {GeneratorKind::sobol, ScrambleKind::none, 0, index_offset};
    for (int j = 0; j < s; ++j) {
        const auto v = detail::sobol_direction_numbers(j);
        for (std::uint64_t n = 0; n < count; ++n) {
            std::uint64_t idx = index_offset + n;
            std::uint32_t acc = 0;
            for (int bit = 0; idx != 0; ++bit, idx >>= 1)
                if (idx & 1ull) acc ^= v[bit];
            ps.points(static_cast<Eigen::Index>(n), j) = static_cast<double>(acc) * 0x1.0p-32;
        }
    }
    return ps;
}

} // namespace qmcrf
