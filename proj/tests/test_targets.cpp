#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "qmcrf/experiment.hpp"
#include "qmcrf/targets.hpp"

using namespace qmcrf;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("r=1 target factor is continuous through x_j = 0") {
    const KernelSpec spec{KernelFamily::gaussian, 0.8, 1};
    Eigen::VectorXd x(1);
    x << 0.0;
    const double at_zero = target_r1_raw(x, spec);
    x << 1e-9;
    CHECK_THAT(target_r1_raw(x, spec), WithinRel(at_zero, 1e-6));
    // the limit factor is 1/sigma^2, so f(0) = sigma^(2d) * 1 * (1/sigma^2)
    CHECK_THAT(at_zero, WithinAbs(1.0, 1e-12));
}

TEST_CASE("r=1 target closed form at d=1, sigma=1, x=1") {
    const KernelSpec spec{KernelFamily::gaussian, 1.0, 1};
    Eigen::VectorXd x(1);
    x << 1.0;
    CHECK_THAT(target_r1_raw(x, spec), WithinAbs(std::exp(-0.5) * (std::exp(1.0) - 1.0), 1e-12));
    CHECK_THAT(target_r1_raw(x, spec), WithinAbs(1.04219061, 1e-7));
}

TEST_CASE("r=1 target equals the kernel integral of g by quadrature") {
    // f(x) = int K(x,z) exp(||z||^2/(2 sigma^2)) dz over [0,1]^d
    for (int d : {1, 2}) {
        const KernelSpec spec{KernelFamily::gaussian, 0.7, d};
        auto integrand_at = [&](const Eigen::VectorXd& x) {
            return oracle::tensor_quadrature(
                [&](const Eigen::VectorXd& z) {
                    return eval_kernel(spec, x, z) * std::exp(z.squaredNorm() / (2.0 * spec.sigma * spec.sigma));
                },
                d, d == 1 ? 1000000 : 1000);
        };
        rng::Stream stream(2021);
        for (int probe = 0; probe < 5; ++probe) {
            Eigen::VectorXd x(d);
            for (int j = 0; j < d; ++j) x[j] = stream.next_double();
            CHECK_THAT(target_r1_raw(x, spec), WithinRel(integrand_at(x), 1e-3));
        }
    }
}

TEST_CASE("r=0.5 target at a center and mirror symmetry") {
    const KernelSpec spec{KernelFamily::gaussian, 0.6, 2};
    const Eigen::VectorXd c1 = Eigen::VectorXd::Constant(2, 1.0 / 3.0);
    const Eigen::VectorXd c2 = Eigen::VectorXd::Constant(2, 2.0 / 3.0);
    CHECK_THAT(target_r05_raw(c1, spec), WithinAbs(1.0 + eval_kernel(spec, c1, c2), 1e-14));
    rng::Stream stream(7);
    for (int probe = 0; probe < 50; ++probe) {
        Eigen::VectorXd x(2);
        x << stream.next_double(), stream.next_double();
        const Eigen::VectorXd mirrored = Eigen::VectorXd::Ones(2) - x;
        CHECK_THAT(target_r05_raw(x, spec), WithinAbs(target_r05_raw(mirrored, spec), 1e-12));
    }
}

TEST_CASE("calibration scales trivially") {
    CHECK_THAT(calibrate_scale([](const Eigen::VectorXd&) { return 5.0; }, 2, 10000, 1), WithinAbs(1.0, 1e-15));
    CHECK_THAT(calibrate_scale([](const Eigen::VectorXd&) { return 1.0; }, 2, 10000, 1), WithinAbs(5.0, 1e-15));
    CHECK(calibrate_scale([](const Eigen::VectorXd& x) { return x[0]; }, 1, 10000, 3) ==
          calibrate_scale([](const Eigen::VectorXd& x) { return x[0]; }, 1, 10000, 3));
    CHECK_THROWS_AS(calibrate_scale([](const Eigen::VectorXd&) { return 1.0; }, 1, 100, 1), config_error);
    CHECK_THROWS_AS(calibrate_scale([](const Eigen::VectorXd&) { return 0.0; }, 1, 10000, 1), numeric_error);
}

TEST_CASE("calibrated targets average to 5 over fresh uniform probes") {
    for (double r : {0.5, 1.0}) {
        for (int d : {1, 3}) {
            const KernelSpec spec{KernelFamily::gaussian, median_bandwidth(d, 100000, 5), d};
            const TargetFunction f = make_target(r, spec, 1000000, 17);
            rng::Stream stream(rng::derive_seed(888, {static_cast<std::uint64_t>(d), r == 1.0 ? 1ull : 0ull}));
            double sum = 0.0;
            const int n = 1000000;
            Eigen::VectorXd x(d);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < d; ++j) x[j] = stream.next_double();
                sum += f(x);
            }
            CHECK_THAT(sum / n, WithinAbs(5.0, 0.05));
        }
    }
}

TEST_CASE("target constructor validates r") {
    CHECK_THROWS_AS(make_target(0.75, {KernelFamily::gaussian, 1.0, 1}, 10000, 1), config_error);
}
