#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>

#include "qmcrf/kernels.hpp"
#include "qmcrf/rng.hpp"

namespace qmcrf {

// Smoothness-r = 1 regression target (before signal calibration):
//   f(x) = sigma^(2d) exp(-||x||^2/(2 sigma^2)) prod_j (exp(x_j/sigma^2)-1)/x_j
// i.e. the image of g(z) = exp(||z||^2/(2 sigma^2)) under the Gaussian
// kernel integral operator on Unif[0,1]^d. The factor at x_j = 0 is the
// removable-singularity limit 1/sigma^2.
inline double target_r1_raw(const Eigen::VectorXd& x, const KernelSpec& spec) {
    const double s2 = spec.sigma * spec.sigma;
    double v = std::pow(s2, spec.dim) * std::exp(-x.squaredNorm() / (2.0 * s2));
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double xj = x[j];
        v *= std::abs(xj) < 1e-12 ? 1.0 / s2 : std::expm1(xj / s2) / xj;
    }
    return v;
}

// Smoothness-r = 0.5 target (before calibration): a two-bump RKHS element,
//   f(x) = K(1/3 * 1_d, x) + K(2/3 * 1_d, x).
inline double target_r05_raw(const Eigen::VectorXd& x, const KernelSpec& spec) {
    const Eigen::VectorXd c1 = Eigen::VectorXd::Constant(spec.dim, 1.0 / 3.0);
    const Eigen::VectorXd c2 = Eigen::VectorXd::Constant(spec.dim, 2.0 / 3.0);
    return eval_kernel(spec, c1, x) + eval_kernel(spec, c2, x);
}

// Calibration constant C such that the mean of C * f over Unif[0,1]^d is 5,
// estimated on n_probe seeded uniform points.
inline double calibrate_scale(const std::function<double(const Eigen::VectorXd&)>& f, int d, int n_probe,
                              std::uint64_t seed) {
    if (n_probe < 10000) throw config_error("calibrate: n_probe must be >= 10^4");
    rng::Stream stream(rng::derive_seed(seed, {rng::kStreamCalibration}));
    Eigen::VectorXd x(d);
    double sum = 0.0;
    for (int i = 0; i < n_probe; ++i) {
        for (int j = 0; j < d; ++j) x[j] = stream.next_double();
        sum += f(x);
    }
    const double mean = sum / static_cast<double>(n_probe);
    if (!(mean > 0.0)) throw numeric_error("calibrate: probe mean is not positive");
    return 5.0 / mean;
}

// Calibrated target function for the regression benchmark.
struct TargetFunction {
    double r = 1.0; // 0.5 or 1.0
    KernelSpec kernel;
    double scale = 1.0; // C, applied multiplicatively

    double operator()(const Eigen::VectorXd& x) const {
        return scale * (r == 1.0 ? target_r1_raw(x, kernel) : target_r05_raw(x, kernel));
    }
};

inline TargetFunction make_target(double r, const KernelSpec& spec, int n_probe, std::uint64_t seed) {
    if (r != 0.5 && r != 1.0) throw config_error("target smoothness r must be 0.5 or 1.0");
    validate(spec);
    TargetFunction t{r, spec, 1.0};
    t.scale = calibrate_scale([&t](const Eigen::VectorXd& x) { return t.r == 1.0 ? target_r1_raw(x, t.kernel) : target_r05_raw(x, t.kernel); },
                              spec.dim, n_probe, seed);
    return t;
}

} // namespace qmcrf
