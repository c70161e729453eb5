#pragma once

#include <array>
#include <cstdint>

#include "qmcrf/point_set.hpp"

namespace qmcrf {

namespace detail {

inline constexpr int kHaltonMaxDim = 64;

// First 64 primes, one base per dimension.
inline constexpr std::array<int, kHaltonMaxDim> kHaltonBases = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
    59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131,
    137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};

inline double radical_inverse(std::uint64_t n, int base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (n != 0) {
        r += f * static_cast<double>(n % static_cast<std::uint64_t>(base));
        n /= static_cast<std::uint64_t>(base);
        f *= inv;
    }
    return r;
}

} // namespace detail

// Halton points: entry (n, j) is the radical inverse of index_offset + n in
// the j-th prime base. The default offset 1 skips the all-zeros point at
// index 0, whose Gaussian quantile would be -inf downstream.
inline PointSet halton_points(std::uint64_t count, int s, std::uint64_t index_offset = 1) {
    if (s < 1 || s > detail::kHaltonMaxDim)
        throw config_error("halton dimension exceeds prime table (max " +
                           std::to_string(detail::kHaltonMaxDim) + ")");
    if (count < 1) throw config_error("halton count must be >= 1");

    PointSet ps;
    ps.points.resize(static_cast<Eigen::Index>(count), s);
    ps.meta = {GeneratorKind::halton, ScrambleKind::none, 0, index_offset};
    for (int j = 0; j < s; ++j)
        for (std::uint64_t n = 0; n < count; ++n)
            ps.points(static_cast<Eigen::Index>(n), j) =
                detail::radical_inverse(index_offset + n, detail::kHaltonBases[static_cast<std::size_t>(j)]);
    return ps;
}

} // namespace qmcrf
