#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qmcrf/errors.hpp"
#include "qmcrf/quantile.hpp"
#include "qmcrf/rng.hpp"

namespace qmcrf {

enum class KernelFamily { gaussian, laplacian, cauchy };

inline const char* to_string(KernelFamily f) {
    switch (f) {
        case KernelFamily::gaussian: return "gaussian";
        case KernelFamily::laplacian: return "laplacian";
        case KernelFamily::cauchy: return "cauchy";
    }
    return "?";
}

// Shift-invariant kernel with bandwidth sigma in the denominator
// convention:
//   gaussian   K(x,x') = exp(-||x-x'||^2 / (2 sigma^2))
//   laplacian  K(x,x') = exp(-||x-x'||_1 / sigma)
//   cauchy     K(x,x') = prod_j 1 / (1 + ((x_j-x'_j)/sigma)^2)
// The spectral scale is the reciprocal: frequencies shrink as sigma grows.
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double sigma = 1.0;
    int dim = 1;
};

inline void validate(const KernelSpec& spec) {
    if (!(spec.sigma > 0.0)) throw config_error("kernel sigma must be positive");
    if (spec.dim < 1) throw config_error("kernel dimension must be >= 1");
}

inline double eval_kernel(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    validate(spec);
    if (x.size() != spec.dim || y.size() != spec.dim) throw config_error("eval_kernel: dimension mismatch");
    switch (spec.family) {
        case KernelFamily::gaussian: {
            const double d2 = (x - y).squaredNorm();
            return std::exp(-d2 / (2.0 * spec.sigma * spec.sigma));
        }
        case KernelFamily::laplacian: {
            const double d1 = (x - y).cwiseAbs().sum();
            return std::exp(-d1 / spec.sigma);
        }
        case KernelFamily::cauchy: {
            double k = 1.0;
            for (Eigen::Index j = 0; j < x.size(); ++j) {
                const double t = (x[j] - y[j]) / spec.sigma;
                k /= 1.0 + t * t;
            }
            return k;
        }
    }
    throw config_error("unknown kernel family");
}

// Componentwise quantile of the kernel's spectral measure (Bochner pair).
inline double spectral_quantile(const KernelSpec& spec, double p) {
    switch (spec.family) {
        case KernelFamily::gaussian: return gaussian_quantile(p) / spec.sigma;
        case KernelFamily::laplacian: return cauchy_quantile(p) / spec.sigma;
        case KernelFamily::cauchy: return laplace_quantile(p) / spec.sigma;
    }
    throw config_error("unknown kernel family");
}

// n x n Gram matrix; symmetric with unit diagonal by construction.
inline Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X) {
    validate(spec);
    if (X.cols() != spec.dim) throw config_error("gram_matrix: dimension mismatch");
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = eval_kernel(spec, X.row(i), X.row(j));
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

// Kernel matrix between two point sets, K(A_i, B_j). The Gaussian branch is
// evaluated blockwise through a GEMM so the n_test x n_train case stays fast.
inline Eigen::MatrixXd cross_kernel(const KernelSpec& spec, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    validate(spec);
    if (A.cols() != spec.dim || B.cols() != spec.dim) throw config_error("cross_kernel: dimension mismatch");
    if (spec.family == KernelFamily::gaussian) {
        const Eigen::VectorXd a2 = A.rowwise().squaredNorm();
        const Eigen::VectorXd b2 = B.rowwise().squaredNorm();
        Eigen::MatrixXd D = (-2.0 * (A * B.transpose())).colwise() + a2;
        D.rowwise() += b2.transpose();
        return (D.array().max(0.0) * (-1.0 / (2.0 * spec.sigma * spec.sigma))).exp().matrix();
    }
    Eigen::MatrixXd K(A.rows(), B.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < B.rows(); ++j) K(i, j) = eval_kernel(spec, A.row(i), B.row(j));
    return K;
}

// Median heuristic: empirical median of ||X - X'|| over n_probe independent
// pairs drawn uniformly from [0,1]^d. Deterministic given (d, n_probe, seed).
inline double median_bandwidth(int d, int n_probe, std::uint64_t seed) {
    if (d < 1) throw config_error("median_bandwidth: dimension must be >= 1");
    if (n_probe < 2) throw config_error("median_bandwidth: n_probe must be >= 2");
    rng::Stream stream(rng::derive_seed(seed, {rng::kStreamBandwidth}));
    std::vector<double> dist(static_cast<std::size_t>(n_probe));
    for (int i = 0; i < n_probe; ++i) {
        double s2 = 0.0;
        for (int j = 0; j < d; ++j) {
            const double diff = stream.next_double() - stream.next_double();
            s2 += diff * diff;
        }
        dist[static_cast<std::size_t>(i)] = std::sqrt(s2);
    }
    const std::size_t lo = (dist.size() - 1) / 2, hi = dist.size() / 2;
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(lo), dist.end());
    const double a = dist[lo];
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(hi), dist.end());
    return 0.5 * (a + dist[hi]);
}

} // namespace qmcrf
