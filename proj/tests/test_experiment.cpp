#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "qmcrf/experiment.hpp"

using namespace qmcrf;
using Catch::Matchers::WithinAbs;

namespace {

std::map<std::string, double> by_key(const std::vector<ResultRecord>& records) {
    std::map<std::string, double> out;
    for (const auto& r : records)
        out[r.sampler + "/" + std::to_string(r.M) + "/" + r.statistic] = r.value;
    return out;
}

} // namespace

TEST_CASE("loglog slope recovers exact power laws") {
    std::vector<std::pair<double, double>> one, two, flat;
    for (int m : {16, 64, 256, 1024}) {
        one.emplace_back(m, 1.0 / m);
        two.emplace_back(m, 1.0 / (static_cast<double>(m) * m));
        flat.emplace_back(m, 0.37);
    }
    CHECK_THAT(fit_loglog_slope(one), WithinAbs(-1.0, 1e-12));
    CHECK_THAT(fit_loglog_slope(two), WithinAbs(-2.0, 1e-12));
    CHECK_THAT(fit_loglog_slope(flat), WithinAbs(0.0, 1e-12));
    CHECK_THROWS_AS(fit_loglog_slope({{16, 1.0}, {32, 0.5}}), config_error);
    CHECK_THROWS_AS(fit_loglog_slope({{16, 1.0}, {32, 0.5}, {64, 0.0}}), numeric_error);
}

TEST_CASE("config validation rejects malformed grids") {
    ExperimentConfig cfg;
    cfg.m_grid = {16, 48};
    CHECK_THROWS_AS(validate_config(cfg), config_error);
    cfg.m_grid = {64, 32};
    CHECK_THROWS_AS(validate_config(cfg), config_error);
    cfg.m_grid = {32, 32};
    CHECK_THROWS_AS(validate_config(cfg), config_error);
    cfg.m_grid = {};
    CHECK_THROWS_AS(validate_config(cfg), config_error);
    cfg.m_grid = {32, 64};
    cfg.samplers = {};
    CHECK_THROWS_AS(validate_config(cfg), config_error);
    cfg.samplers = {Sampler::mc};
    cfg.d = 0;
    CHECK_THROWS_AS(validate_config(cfg), config_error);
    cfg.d = 1;
    CHECK_NOTHROW(validate_config(cfg));
    cfg.experiment = ExperimentKind::krr_bench;
    cfg.r = 0.7;
    CHECK_THROWS_AS(validate_config(cfg), config_error);
}

TEST_CASE("sampler nodes are reproducible and in range") {
    for (Sampler s : {Sampler::mc, Sampler::halton, Sampler::sobol_owen, Sampler::sobol_cp}) {
        const PointSet a = sampler_points(s, 64, 3, 5);
        const PointSet b = sampler_points(s, 64, 3, 5);
        CHECK(a.points == b.points);
        CHECK((a.points.array() >= 0.0).all());
        CHECK((a.points.array() < 1.0).all());
    }
    CHECK_THROWS_AS(sampler_points(Sampler::sobol_owen, 48, 2, 1), config_error);
}

TEST_CASE("slope record is skipped (and flagged) on short grids") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::approx_avg;
    cfg.m_grid = {32};
    cfg.samplers = {Sampler::mc};
    cfg.n_pairs = 50;
    cfg.trials = 3;
    cfg.sigma = 0.5;
    cfg.threads = 1;
    const RunOutput out = run_approx_error(cfg);
    for (const auto& r : out.records) CHECK(r.statistic != "loglog_slope");
    REQUIRE(out.warnings.size() == 1);
}

TEST_CASE("R=1 sup-avg and det runs coincide on the same draws") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::approx_sup_avg;
    cfg.samplers = {Sampler::mc, Sampler::sobol_owen};
    cfg.m_grid = {16, 32, 64};
    cfg.n_pairs = 200;
    cfg.trials = 1;
    cfg.sigma = 0.4;
    cfg.threads = 1;
    const auto sup_avg = by_key(run_approx_error(cfg).records);
    cfg.experiment = ExperimentKind::approx_det;
    const auto det = by_key(run_approx_error(cfg).records);
    for (const auto& [key, value] : det) {
        const auto pos = key.rfind("sup_sq_err");
        if (pos == std::string::npos) continue;
        const std::string counterpart = key.substr(0, pos) + "sup_mean_sq_err";
        REQUIRE(sup_avg.count(counterpart) == 1);
        CHECK(sup_avg.at(counterpart) == value);
    }
}

TEST_CASE("approx runs are deterministic and schedule-independent") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::approx_avg;
    cfg.samplers = {Sampler::mc, Sampler::halton, Sampler::sobol_owen, Sampler::sobol_cp};
    cfg.m_grid = {16, 32, 64};
    cfg.n_pairs = 100;
    cfg.trials = 8;
    cfg.threads = 1;
    const RunOutput serial = run_approx_error(cfg);
    cfg.threads = 4;
    const RunOutput threaded = run_approx_error(cfg);
    const RunOutput again = run_approx_error(cfg);
    REQUIRE(serial.records.size() == threaded.records.size());
    for (std::size_t i = 0; i < serial.records.size(); ++i) {
        CHECK(serial.records[i].value == threaded.records[i].value);
        CHECK(threaded.records[i].value == again.records[i].value);
        CHECK(serial.records[i].statistic == threaded.records[i].statistic);
    }
}

TEST_CASE("sampler ordering at desk scale in d=1") {
    // protocol scale: 10^3 pairs, 100 replicates. The 1.5*QMC factor is
    // tight at M=64 (the expected ratio there is ~1.49), so the seed is
    // pinned; at M >= 256 the ordering holds with wide margin on every
    // seed tried.
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::approx_avg;
    cfg.d = 1;
    cfg.samplers = {Sampler::mc, Sampler::halton, Sampler::sobol_owen};
    cfg.m_grid = {64, 256, 1024};
    cfg.n_pairs = 1000;
    cfg.trials = 100;
    cfg.master_seed = 123;
    const auto stats = by_key(run_approx_error(cfg).records);
    for (int m : cfg.m_grid) {
        const double rqmc = stats.at("sobol_owen/" + std::to_string(m) + "/mean_sq_err");
        const double qmc = stats.at("halton/" + std::to_string(m) + "/mean_sq_err");
        const double mc = stats.at("mc/" + std::to_string(m) + "/mean_sq_err");
        CHECK(rqmc <= 1.5 * qmc);
        CHECK(rqmc <= mc);
    }
}

TEST_CASE("krr bench emits quantile-consistent records deterministically") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::krr_bench;
    cfg.d = 1;
    cfg.samplers = {Sampler::mc, Sampler::sobol_owen};
    cfg.m_grid = {16, 32};
    cfg.n_train = 128;
    cfg.n_test = 2000;
    cfg.trials = 6;
    cfg.r = 1.0;
    cfg.threads = 2;
    const RunOutput a = run_krr_bench(cfg);
    const RunOutput b = run_krr_bench(cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].value == b.records[i].value);

    const auto stats = by_key(a.records);
    REQUIRE(stats.count("exact/0/test_mse_mean") == 1);
    for (const std::string sampler : {"exact/0", "mc/16", "mc/32", "sobol_owen/16", "sobol_owen/32"}) {
        CHECK(stats.at(sampler + "/test_mse_q25") <= stats.at(sampler + "/test_mse_q75"));
        CHECK(stats.at(sampler + "/test_mse_mean") > 0.0);
    }
}

TEST_CASE("noiseless interpolation sanity through the bench target") {
    // exact KRR with vanishing lambda reproduces noiseless labels on train
    const int n = 64, d = 1;
    const KernelSpec spec{KernelFamily::gaussian, 0.2, d};
    const TargetFunction target = make_target(1.0, spec, 10000, 3);
    RegressionDataset data;
    data.X.resize(n, d);
    data.X.col(0) = Eigen::VectorXd::LinSpaced(n, 0.0, 0.99);
    data.y.resize(n);
    for (int i = 0; i < n; ++i) data.y[i] = target(data.X.row(i).transpose());
    const KrrModel model = fit_exact(data, spec, 1e-10);
    CHECK(test_mse(model, data.X, data.y) <= 1e-6);
}

TEST_CASE("uniform matrices are seed-deterministic") {
    CHECK(uniform_matrix(10, 3, 5) == uniform_matrix(10, 3, 5));
    CHECK(uniform_matrix(10, 3, 5) != uniform_matrix(10, 3, 6));
}
