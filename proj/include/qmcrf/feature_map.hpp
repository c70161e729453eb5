#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "qmcrf/kernels.hpp"
#include "qmcrf/point_set.hpp"

namespace qmcrf {

// Realized random-feature frequencies and phases: row i holds the
// transformed frequency vector of the i-th node and phases[i] its phase in
// [0,1). Immutable after build; safe to share across threads.
struct FeatureBank {
    Eigen::MatrixXd frequencies; // M x d
    Eigen::VectorXd phases;      // M
    KernelSpec kernel;
    PointSetMeta source_meta;

    Eigen::Index size() const { return frequencies.rows(); }
};

struct FeatureVector {
    Eigen::VectorXd values; // 1/sqrt(M) scaling applied
};

// Map uniform nodes omega = (t, b) in [0,1)^(d+1) through the spectral
// quantile: frequencies(i,j) = Q_j(clamp(t_ij)), phases(i) = b_i (the last
// column). t is clamped to [2^-53, 1-2^-53] so that nodes of unscrambled
// nets sitting exactly on the boundary stay finite.
inline FeatureBank build_features(const PointSet& ps, const KernelSpec& kernel) {
    validate(kernel);
    if (ps.dim() != kernel.dim + 1)
        throw config_error("build_features: point set must have kernel dim + 1 columns");
    constexpr double eps = 0x1.0p-53;
    const Eigen::Index m = ps.count();
    const int d = kernel.dim;

    FeatureBank bank;
    bank.kernel = kernel;
    bank.source_meta = ps.meta;
    bank.frequencies.resize(m, d);
    bank.phases = ps.points.col(d);
    for (Eigen::Index i = 0; i < m; ++i)
        for (int j = 0; j < d; ++j) {
            double t = ps.points(i, j);
            if (t < eps) t = eps;
            if (t > 1.0 - eps) t = 1.0 - eps;
            bank.frequencies(i, j) = spectral_quantile(kernel, t);
        }
    return bank;
}

// phi_M(x): entry i is sqrt(2/M) * cos(x.w_i + 2*pi*b_i).
inline FeatureVector feature_vector(const FeatureBank& bank, const Eigen::VectorXd& x) {
    if (x.size() != bank.kernel.dim) throw config_error("feature_vector: dimension mismatch");
    const double scale = std::sqrt(2.0 / static_cast<double>(bank.size()));
    constexpr double two_pi = 6.28318530717958647692;
    FeatureVector fv;
    fv.values = (((bank.frequencies * x).array() + two_pi * bank.phases.array()).cos() * scale).matrix();
    return fv;
}

// Feature design matrix: row i is phi_M(X.row(i)).
inline Eigen::MatrixXd feature_matrix(const FeatureBank& bank, const Eigen::MatrixXd& X) {
    if (X.cols() != bank.kernel.dim) throw config_error("feature_matrix: dimension mismatch");
    const double scale = std::sqrt(2.0 / static_cast<double>(bank.size()));
    constexpr double two_pi = 6.28318530717958647692;
    Eigen::MatrixXd phi = X * bank.frequencies.transpose();
    phi.rowwise() += (two_pi * bank.phases).transpose();
    return (phi.array().cos() * scale).matrix();
}

// K_M(x,x') = phi_M(x)^T phi_M(x'); identical to the feature average
// (1/M) sum_i psi(x,w_i) psi(x',w_i).
inline double approx_kernel(const FeatureBank& bank, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return feature_vector(bank, x).values.dot(feature_vector(bank, y).values);
}

} // namespace qmcrf
