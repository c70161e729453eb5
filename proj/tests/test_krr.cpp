#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qmcrf/experiment.hpp"
#include "qmcrf/krr.hpp"
#include "qmcrf/targets.hpp"

using namespace qmcrf;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RegressionDataset random_dataset(int n, int d, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> norm(0.0, 1.0);
    RegressionDataset data;
    data.X.resize(n, d);
    data.y.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) data.X(i, j) = unif(gen);
        data.y[i] = norm(gen);
    }
    return data;
}

} // namespace

TEST_CASE("exact fit on one point solves alpha = y/(1+lambda)") {
    RegressionDataset data;
    data.X = Eigen::MatrixXd::Constant(1, 1, 0.3);
    data.y = Eigen::VectorXd::Constant(1, 2.5);
    const KrrModel model = fit_exact(data, {KernelFamily::gaussian, 1.0, 1}, 0.125);
    CHECK_THAT(model.coef[0], WithinAbs(2.5 / 1.125, 1e-12));
}

TEST_CASE("huge lambda shrinks the dual coefficients") {
    const RegressionDataset data = random_dataset(30, 2, 1);
    const double lambda = 1e9;
    const KrrModel model = fit_exact(data, {KernelFamily::gaussian, 0.5, 2}, lambda);
    CHECK(model.coef.norm() <= data.y.norm() / (30.0 * lambda) * (1.0 + 1e-6));
}

TEST_CASE("exact fit residual stays below 1e-8") {
    const RegressionDataset data = random_dataset(50, 3, 2);
    const KrrModel model = fit_exact(data, {KernelFamily::gaussian, 0.7, 3}, 1e-4);
    CHECK(model.fit_residual <= 1e-8);
}

TEST_CASE("feature fit scalar closed form") {
    // n=1, M=1, phi = c, y = v -> w = c v / (c^2 + lambda)
    RegressionDataset data;
    data.X = Eigen::MatrixXd::Constant(1, 1, 0.0);
    data.y = Eigen::VectorXd::Constant(1, 3.0);
    Eigen::MatrixXd node(1, 2);
    node << 0.5, 0.0; // zero frequency, zero phase -> phi = sqrt(2)
    const FeatureBank bank = build_features([&] {
        PointSet ps;
        ps.points = node;
        return ps;
    }(), {KernelFamily::gaussian, 1.0, 1});
    const double lambda = 0.2;
    const KrrModel model = fit_features(data, bank, lambda);
    const double c = std::sqrt(2.0);
    CHECK_THAT(model.coef[0], WithinAbs(c * 3.0 / (c * c + lambda), 1e-12));
}

TEST_CASE("zero labels give exactly zero weights") {
    RegressionDataset data = random_dataset(10, 2, 3);
    data.y.setZero();
    const FeatureBank bank =
        build_features(sampler_points(Sampler::sobol_owen, 8, 3, 4), {KernelFamily::gaussian, 0.6, 2});
    const KrrModel model = fit_features(data, bank, 0.01);
    CHECK(model.coef.isZero(0.0));
    CHECK(predict(model, data.X).isZero(0.0));
}

TEST_CASE("primal and dual solutions agree on the approximate kernel") {
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<int> n_dist(2, 60), m_dist(1, 6);
    for (int inst = 0; inst < 40; ++inst) {
        const int n = n_dist(gen), m = 1 << m_dist(gen), d = 2;
        const RegressionDataset data = random_dataset(n, d, 1000 + static_cast<unsigned>(inst));
        const KernelSpec spec{KernelFamily::gaussian, 0.5, d};
        const FeatureBank bank =
            build_features(sampler_points(Sampler::sobol_owen, m, d + 1, 55u + static_cast<std::uint64_t>(inst)), spec);
        const double lambda = 0.05;

        const KrrModel primal = fit_features(data, bank, lambda);
        // dual oracle: alpha = (K_M + n lambda I)^{-1} y, predict via K_M cross
        const Eigen::MatrixXd phi = feature_matrix(bank, data.X);
        Eigen::MatrixXd km = phi * phi.transpose();
        km.diagonal().array() += n * lambda;
        const Eigen::VectorXd alpha = km.ldlt().solve(data.y);
        const Eigen::MatrixXd x_test = uniform_matrix(20, d, 777u + static_cast<std::uint64_t>(inst));
        const Eigen::VectorXd dual_pred = feature_matrix(bank, x_test) * (phi.transpose() * alpha);
        const Eigen::VectorXd primal_pred = predict(primal, x_test);
        const double denom = std::max(dual_pred.norm(), 1e-12);
        CHECK((primal_pred - dual_pred).norm() / denom <= 1e-6);
    }
}

TEST_CASE("training predictions interpolate as lambda vanishes") {
    // spread-out points and a narrow kernel keep K well conditioned
    RegressionDataset data = random_dataset(10, 1, 8);
    data.X.col(0) = Eigen::VectorXd::LinSpaced(10, 0.05, 0.95);
    const KernelSpec spec{KernelFamily::gaussian, 0.1, 1};
    const KrrModel model = fit_exact(data, spec, 1e-10);
    const Eigen::VectorXd pred = predict(model, data.X);
    CHECK((pred - data.y).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("single-point exact prediction is alpha * K(x1, x)") {
    RegressionDataset data;
    data.X = Eigen::MatrixXd::Constant(1, 1, 0.4);
    data.y = Eigen::VectorXd::Constant(1, -1.5);
    const KernelSpec spec{KernelFamily::gaussian, 1.0, 1};
    const KrrModel model = fit_exact(data, spec, 0.5);
    Eigen::MatrixXd x_test(1, 1);
    x_test << 0.9;
    CHECK_THAT(predict(model, x_test)[0],
               WithinAbs(model.coef[0] * eval_kernel(spec, data.X.row(0), x_test.row(0)), 1e-14));
}

TEST_CASE("test_mse closed forms and hand loop") {
    RegressionDataset data = random_dataset(12, 2, 21);
    const KrrModel model = fit_exact(data, {KernelFamily::gaussian, 0.5, 2}, 0.1);
    const Eigen::MatrixXd x_test = uniform_matrix(15, 2, 22);
    const Eigen::VectorXd pred = predict(model, x_test);
    CHECK(test_mse(model, x_test, pred) == 0.0);
    CHECK_THAT(test_mse(model, x_test, pred.array() + 0.3), WithinAbs(0.09, 1e-12));
    double hand = 0.0;
    const Eigen::VectorXd target = Eigen::VectorXd::LinSpaced(15, -1.0, 1.0);
    for (int i = 0; i < 15; ++i) hand += (pred[i] - target[i]) * (pred[i] - target[i]);
    CHECK_THAT(test_mse(model, x_test, target), WithinAbs(hand / 15.0, 1e-12));
}

TEST_CASE("lambda schedule closed forms") {
    CHECK(lambda_schedule(1, 0.7, 0.25) == 0.25);
    CHECK_THAT(lambda_schedule(16, 0.5, 0.25), WithinAbs(0.0625, 1e-15));
    CHECK_THAT(lambda_schedule(1000, 1.0, 0.25), WithinAbs(0.025, 1e-12));
    CHECK_THROWS_AS(lambda_schedule(0, 0.5), config_error);
    CHECK_THROWS_AS(lambda_schedule(10, 0.4), config_error);
    CHECK_THROWS_AS(lambda_schedule(10, 1.1), config_error);
}

TEST_CASE("feature budget closed forms") {
    // c chosen so lambda = exp(-1): c = e^{-1} * n^{1/(2r+1)} with n=1
    const double c = std::exp(-1.0);
    CHECK(feature_budget(1, 0.5, 1.0, c) == 3); // ceil(e)
    CHECK(feature_budget(1, 0.5, 0.0, c) == static_cast<long long>(std::ceil(std::exp(1.0))));
    CHECK(feature_budget(16, 0.5, 0.0, 0.25) == 16); // ceil(1/lambda), lambda = 1/16
    CHECK_THROWS_AS(feature_budget(1, 0.5, 1.0, 1.5), numeric_error);
}

TEST_CASE("feature budget is nondecreasing in n") {
    long long prev = 0;
    for (int e = 6; e <= 14; ++e) {
        const long long b = feature_budget(1 << e, 1.0, 1.0, 0.25);
        CHECK(b >= prev);
        prev = b;
    }
}

TEST_CASE("training error grows with regularization") {
    const RegressionDataset data = random_dataset(40, 2, 33);
    const KernelSpec spec{KernelFamily::gaussian, 0.5, 2};
    double prev = -1.0;
    for (double lambda : {1e-6, 1e-4, 1e-2, 1.0, 100.0}) {
        const double mse = test_mse(fit_exact(data, spec, lambda), data.X, data.y);
        CHECK(mse >= prev - 1e-12);
        prev = mse;
    }
}

TEST_CASE("dataset validation") {
    RegressionDataset bad;
    bad.X = Eigen::MatrixXd::Zero(3, 1);
    bad.y = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(fit_exact(bad, {KernelFamily::gaussian, 1.0, 1}, 0.1), config_error);
    RegressionDataset ok = random_dataset(5, 1, 9);
    CHECK_THROWS_AS(fit_exact(ok, {KernelFamily::gaussian, 1.0, 1}, 0.0), config_error);
}

TEST_CASE("exact KRR test error improves as n grows on the smooth target") {
    // mean over 20 trials at n in {256, 2048}; monotone trend endpoint check
    const int d = 1;
    const double sigma = median_bandwidth(d, 100000, 12);
    const KernelSpec spec{KernelFamily::gaussian, sigma, d};
    const TargetFunction target = make_target(1.0, spec, 100000, 12);
    const Eigen::MatrixXd x_test = uniform_matrix(2000, d, 5000);
    Eigen::VectorXd truth(2000);
    for (int i = 0; i < 2000; ++i) truth[i] = target(x_test.row(i).transpose());

    auto mean_mse = [&](int n) {
        const double lambda = lambda_schedule(n, 1.0, 0.25);
        double acc = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            RegressionDataset data;
            data.X = uniform_matrix(n, d, rng::derive_seed(321, {rng::kStreamTrain, static_cast<std::uint64_t>(trial),
                                                                 static_cast<std::uint64_t>(n)}));
            rng::Stream noise(rng::derive_seed(321, {rng::kStreamNoise, static_cast<std::uint64_t>(trial),
                                                     static_cast<std::uint64_t>(n)}));
            data.y.resize(n);
            for (int i = 0; i < n; ++i) data.y[i] = target(data.X.row(i).transpose()) + gaussian_quantile(noise.next_open());
            acc += test_mse(fit_exact(data, spec, lambda), x_test, truth);
        }
        return acc / 20.0;
    };
    CHECK(mean_mse(2048) < mean_mse(256));
}
