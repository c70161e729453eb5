#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <optional>

#include "qmcrf/feature_map.hpp"
#include "qmcrf/kernels.hpp"

namespace qmcrf {

struct RegressionDataset {
    Eigen::MatrixXd X;                   // n x d
    Eigen::VectorXd y;                   // n
    std::optional<Eigen::VectorXd> truth; // noiseless f(X), when known

    Eigen::Index n() const { return X.rows(); }
};

inline void validate(const RegressionDataset& data) {
    if (data.X.rows() != data.y.size()) throw config_error("dataset row counts disagree");
    if (data.truth && data.truth->size() != data.y.size()) throw config_error("dataset truth length disagrees");
    if (data.X.rows() < 1) throw config_error("dataset must have n >= 1");
}

enum class KrrMode { exact, features };

// Fitted ridge model. In exact mode `coef` holds the dual vector alpha with
// f(x) = sum_i alpha_i K(x_i, x); in feature mode it holds the primal
// weights w with f(x) = phi_M(x)^T w. Immutable after fit.
struct KrrModel {
    KrrMode mode = KrrMode::exact;
    double lambda = 0.0;
    Eigen::VectorXd coef;
    double fit_residual = 0.0; // relative residual of the normal equations

    // training references
    Eigen::MatrixXd X_train;   // exact mode
    KernelSpec kernel;         // exact mode
    std::shared_ptr<const FeatureBank> bank; // feature mode
};

namespace detail {

inline Eigen::VectorXd spd_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs, double* rel_residual) {
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) throw numeric_error("SPD factorization failed");
    Eigen::VectorXd x = llt.solve(rhs);
    const double denom = rhs.norm();
    const double res = denom > 0.0 ? (A * x - rhs).norm() / denom : (A * x).norm();
    if (rel_residual) *rel_residual = res;
    if (res > 1e-8) throw numeric_error("ridge solve residual above 1e-8");
    return x;
}

} // namespace detail

// Exact kernel ridge regression: alpha = (K + n*lambda*I)^{-1} y.
inline KrrModel fit_exact(const RegressionDataset& data, const KernelSpec& spec, double lambda) {
    validate(data);
    if (!(lambda > 0.0)) throw config_error("lambda must be positive");
    const Eigen::Index n = data.n();
    Eigen::MatrixXd A = gram_matrix(spec, data.X);
    A.diagonal().array() += static_cast<double>(n) * lambda;

    KrrModel model;
    model.mode = KrrMode::exact;
    model.lambda = lambda;
    model.kernel = spec;
    model.X_train = data.X;
    model.coef = detail::spd_solve(A, data.y, &model.fit_residual);
    return model;
}

// Feature-space ridge regression: w = (Phi^T Phi + n*lambda*I)^{-1} Phi^T y,
// with Phi the n x M feature design matrix. O(n M^2 + M^3) time.
inline KrrModel fit_features(const RegressionDataset& data, const FeatureBank& bank, double lambda) {
    validate(data);
    if (!(lambda > 0.0)) throw config_error("lambda must be positive");
    const Eigen::Index n = data.n();
    const Eigen::MatrixXd phi = feature_matrix(bank, data.X);
    const Eigen::Index m = phi.cols();
    Eigen::MatrixXd A(m, m);
    A.setZero();
    A.selfadjointView<Eigen::Lower>().rankUpdate(phi.transpose());
    A = A.selfadjointView<Eigen::Lower>();
    A.diagonal().array() += static_cast<double>(n) * lambda;

    KrrModel model;
    model.mode = KrrMode::features;
    model.lambda = lambda;
    model.bank = std::make_shared<FeatureBank>(bank);
    model.coef = detail::spd_solve(A, phi.transpose() * data.y, &model.fit_residual);
    return model;
}

inline Eigen::VectorXd predict(const KrrModel& model, const Eigen::MatrixXd& X_test) {
    // blockwise so the n_test x n_train kernel (or n_test x M feature)
    // matrix never fully materializes
    const Eigen::Index block = 4096;
    Eigen::VectorXd out(X_test.rows());
    if (model.mode == KrrMode::exact) {
        if (X_test.cols() != model.X_train.cols()) throw config_error("predict: dimension mismatch");
        for (Eigen::Index i0 = 0; i0 < X_test.rows(); i0 += block) {
            const Eigen::Index rows = std::min(block, X_test.rows() - i0);
            out.segment(i0, rows) = cross_kernel(model.kernel, X_test.middleRows(i0, rows), model.X_train) * model.coef;
        }
        return out;
    }
    for (Eigen::Index i0 = 0; i0 < X_test.rows(); i0 += block) {
        const Eigen::Index rows = std::min(block, X_test.rows() - i0);
        out.segment(i0, rows) = feature_matrix(*model.bank, X_test.middleRows(i0, rows)) * model.coef;
    }
    return out;
}

inline double test_mse(const KrrModel& model, const Eigen::MatrixXd& X_test, const Eigen::VectorXd& target) {
    if (X_test.rows() != target.size()) throw config_error("test_mse: lengths disagree");
    return (predict(model, X_test) - target).squaredNorm() / static_cast<double>(target.size());
}

// lambda = c * n^(-1/(2r+1)); the benchmark schedule with c = 0.25.
inline double lambda_schedule(int n, double r, double c = 0.25) {
    if (n < 1) throw config_error("lambda_schedule: n must be >= 1");
    if (!(r >= 0.5 && r <= 1.0)) throw config_error("lambda_schedule: r must lie in [0.5, 1]");
    return c * std::pow(static_cast<double>(n), -1.0 / (2.0 * r + 1.0));
}

// Feature budget ceil(log^a(1/lambda) / lambda) with lambda from the
// schedule above; the "theoretical budget" experiment mode.
inline long long feature_budget(int n, double r, double a, double c = 0.25) {
    const double lambda = lambda_schedule(n, r, c);
    if (lambda >= 1.0) throw numeric_error("feature_budget: lambda >= 1 makes log(1/lambda) nonpositive");
    return static_cast<long long>(std::ceil(std::pow(std::log(1.0 / lambda), a) / lambda));
}

} // namespace qmcrf
