#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qmcrf/point_set.hpp"
#include "qmcrf/rng.hpp"

namespace qmcrf {

struct DiscrepancyReport {
    double value = 0.0;
    bool exact = false;
    std::uint64_t boxes_examined = 0;
};

namespace detail {

// Local discrepancy at the anchored box with upper corner t, evaluated with
// both the closed (<=) and open (<) point counts. The closed count bounds
// the supremum from corners themselves, the open count bounds it from box
// corners approached from below.
inline double local_discrepancy(const Eigen::MatrixXd& pts, const std::vector<double>& corner) {
    const Eigen::Index m = pts.rows();
    const int s = static_cast<int>(pts.cols());
    std::int64_t closed = 0, open = 0;
    for (Eigen::Index n = 0; n < m; ++n) {
        bool le = true, lt = true;
        for (int j = 0; j < s; ++j) {
            const double x = pts(n, j), t = corner[static_cast<std::size_t>(j)];
            if (x > t) { le = false, lt = false; break; }
            if (x == t) lt = false;
        }
        closed += le;
        open += lt;
    }
    double vol = 1.0;
    for (int j = 0; j < s; ++j) vol *= corner[static_cast<std::size_t>(j)];
    const double inv_m = 1.0 / static_cast<double>(m);
    return std::max(static_cast<double>(closed) * inv_m - vol, vol - static_cast<double>(open) * inv_m);
}

} // namespace detail

// Exact star discrepancy by enumeration of the critical grid: in each
// dimension the candidate corner values are the point coordinates plus 1.
// The supremum over all anchored boxes is attained on this grid once both
// open and closed counts are examined at every corner.
inline DiscrepancyReport star_discrepancy_exact(const PointSet& ps) {
    const Eigen::Index m = ps.count();
    const int s = static_cast<int>(ps.dim());
    if (std::pow(static_cast<double>(m), s) * s > 1e8)
        throw config_error("star_discrepancy_exact: instance too large, use the lower-bound estimator");

    std::vector<std::vector<double>> grid(static_cast<std::size_t>(s));
    for (int j = 0; j < s; ++j) {
        auto& g = grid[static_cast<std::size_t>(j)];
        g.reserve(static_cast<std::size_t>(m) + 1);
        for (Eigen::Index n = 0; n < m; ++n) g.push_back(ps.points(n, j));
        g.push_back(1.0);
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
    }

    DiscrepancyReport rep;
    rep.exact = true;
    std::vector<std::size_t> idx(static_cast<std::size_t>(s), 0);
    std::vector<double> corner(static_cast<std::size_t>(s));
    for (;;) {
        for (int j = 0; j < s; ++j) corner[static_cast<std::size_t>(j)] = grid[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
        rep.value = std::max(rep.value, detail::local_discrepancy(ps.points, corner));
        ++rep.boxes_examined;
        int j = 0;
        while (j < s) {
            if (++idx[static_cast<std::size_t>(j)] < grid[static_cast<std::size_t>(j)].size()) break;
            idx[static_cast<std::size_t>(j)] = 0;
            ++j;
        }
        if (j == s) break;
    }
    return rep;
}

// Lower bound on the star discrepancy: the maximum local discrepancy over
// every point-anchored box plus n_probes seeded pseudo-random boxes. Never
// exceeds the exact value, and attains it whenever a probe hits a critical
// corner.
inline DiscrepancyReport star_discrepancy_lower_bound(const PointSet& ps, int n_probes, std::uint64_t seed) {
    if (n_probes < 1) throw config_error("n_probes must be >= 1");
    const int s = static_cast<int>(ps.dim());
    DiscrepancyReport rep;
    rep.exact = false;
    std::vector<double> corner(static_cast<std::size_t>(s));

    for (Eigen::Index n = 0; n < ps.count(); ++n) {
        for (int j = 0; j < s; ++j) corner[static_cast<std::size_t>(j)] = ps.points(n, j);
        rep.value = std::max(rep.value, detail::local_discrepancy(ps.points, corner));
        ++rep.boxes_examined;
    }
    rng::Stream stream(rng::derive_seed(seed, {rng::kStreamProbe}));
    for (int p = 0; p < n_probes; ++p) {
        for (int j = 0; j < s; ++j) corner[static_cast<std::size_t>(j)] = 1.0 - stream.next_double();
        rep.value = std::max(rep.value, detail::local_discrepancy(ps.points, corner));
        ++rep.boxes_examined;
    }
    return rep;
}

} // namespace qmcrf
