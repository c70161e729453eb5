#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qmcrf/point_set.hpp"

namespace qmcrf {

namespace detail {

inline std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// Visit every shape vector (k_1..k_s) with nonnegative parts summing to q.
template <typename Fn>
inline void for_each_composition(int q, int s, Fn&& fn) {
    std::vector<int> k(static_cast<std::size_t>(s), 0);
    k[0] = q;
    for (;;) {
        fn(k);
        // next composition in colex order
        int i = 0;
        while (i < s - 1 && k[static_cast<std::size_t>(i)] == 0) ++i;
        if (i == s - 1) break;
        const int v = k[static_cast<std::size_t>(i)];
        k[static_cast<std::size_t>(i)] = 0;
        k[0] = v - 1;
        k[static_cast<std::size_t>(i + 1)] += 1;
    }
}

// Histogram of points over the elementary-interval grid of a given shape.
inline std::vector<std::int64_t> cell_histogram(const Eigen::MatrixXd& pts, const std::vector<int>& k, int base) {
    const int s = static_cast<int>(k.size());
    std::int64_t cells = 1;
    for (int j = 0; j < s; ++j) cells *= ipow(base, k[static_cast<std::size_t>(j)]);
    std::vector<std::int64_t> hist(static_cast<std::size_t>(cells), 0);
    for (Eigen::Index n = 0; n < pts.rows(); ++n) {
        std::int64_t idx = 0;
        for (int j = 0; j < s; ++j) {
            const std::int64_t bk = ipow(base, k[static_cast<std::size_t>(j)]);
            std::int64_t c = static_cast<std::int64_t>(pts(n, j) * static_cast<double>(bk));
            if (c >= bk) c = bk - 1; // guard against rounding at the right edge
            idx = idx * bk + c;
        }
        ++hist[static_cast<std::size_t>(idx)];
    }
    return hist;
}

// True iff every elementary interval of volume base^(-q) holds exactly
// `want` points, and (when cap >= 0) none holds more than `cap`.
inline bool intervals_balanced(const Eigen::MatrixXd& pts, int q, int base, std::int64_t want, std::int64_t cap) {
    const int s = static_cast<int>(pts.cols());
    bool ok = true;
    for_each_composition(q, s, [&](const std::vector<int>& k) {
        if (!ok) return;
        const auto hist = cell_histogram(pts, k, base);
        for (std::int64_t c : hist) {
            if (want >= 0 && c != want) { ok = false; return; }
            if (cap >= 0 && c > cap) { ok = false; return; }
        }
    });
    return ok;
}

} // namespace detail

// (t,m,s)-net check: every base-b elementary interval of volume b^(t-m)
// must contain exactly b^t points. Enumerates all compositions of m-t.
inline bool check_net_balance(const PointSet& ps, const NetParams& p) {
    if (p.base < 2 || p.t < 0 || p.m < p.t || p.s < 1) throw config_error("invalid net parameters");
    if (ps.dim() != p.s) throw config_error("net check: dimension mismatch");
    if (ps.count() != detail::ipow(p.base, p.m)) throw config_error("net check: point count != b^m");
    return detail::intervals_balanced(ps.points, p.m - p.t, p.base, detail::ipow(p.base, p.t), -1);
}

// (lambda,t,m,s)-net check: lambda*b^m points, exact balance lambda*b^t at
// volume b^(t-m), and no interval of volume b^(t-m-1) holding more than b^t.
inline bool check_lambda_net(const PointSet& ps, int lambda, const NetParams& p) {
    if (p.base < 2 || p.t < 0 || p.m < p.t || p.s < 1) throw config_error("invalid net parameters");
    if (lambda < 1 || lambda >= p.base) throw config_error("lambda must satisfy 1 <= lambda < base");
    if (ps.dim() != p.s) throw config_error("net check: dimension mismatch");
    if (ps.count() != lambda * detail::ipow(p.base, p.m)) throw config_error("net check: point count != lambda*b^m");
    const std::int64_t bt = detail::ipow(p.base, p.t);
    if (!detail::intervals_balanced(ps.points, p.m - p.t, p.base, lambda * bt, -1)) return false;
    return detail::intervals_balanced(ps.points, p.m - p.t + 1, p.base, -1, bt);
}

// Smallest t at which the set passes check_net_balance; always exists
// because t = m is balanced trivially.
inline int measure_net_t(const PointSet& ps, int base, int m) {
    for (int t = 0; t <= m; ++t) {
        NetParams p{base, t, m, static_cast<int>(ps.dim())};
        if (check_net_balance(ps, p)) return t;
    }
    return m;
}

} // namespace qmcrf
