#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qmcrf/feature_map.hpp"
#include "qmcrf/halton.hpp"
#include "qmcrf/kernels.hpp"
#include "qmcrf/krr.hpp"
#include "qmcrf/parallel.hpp"
#include "qmcrf/point_set.hpp"
#include "qmcrf/report.hpp"
#include "qmcrf/rng.hpp"
#include "qmcrf/scramble.hpp"
#include "qmcrf/sobol.hpp"
#include "qmcrf/targets.hpp"

namespace qmcrf {

enum class Sampler { mc, halton, sobol_owen, sobol_cp };
enum class ExperimentKind { approx_avg, approx_sup_avg, approx_det, krr_bench };

inline const char* to_string(Sampler s) {
    switch (s) {
        case Sampler::mc: return "mc";
        case Sampler::halton: return "halton";
        case Sampler::sobol_owen: return "sobol_owen";
        case Sampler::sobol_cp: return "sobol_cp";
    }
    return "?";
}

inline const char* to_string(ExperimentKind e) {
    switch (e) {
        case ExperimentKind::approx_avg: return "approx_avg";
        case ExperimentKind::approx_sup_avg: return "approx_sup_avg";
        case ExperimentKind::approx_det: return "approx_det";
        case ExperimentKind::krr_bench: return "krr_bench";
    }
    return "?";
}

inline Sampler parse_sampler(const std::string& s) {
    if (s == "mc") return Sampler::mc;
    if (s == "halton") return Sampler::halton;
    if (s == "sobol_owen" || s == "sobol-owen") return Sampler::sobol_owen;
    if (s == "sobol_cp" || s == "sobol-cp") return Sampler::sobol_cp;
    throw config_error("unknown sampler: " + s);
}

// Declarative description of one benchmark run. Zeros mean "resolve a
// kind-dependent default" (sigma: median heuristic; n_pairs: 10^3 for the
// averaged experiments, 10^4 for the deterministic one; trials: 100 for
// approximation runs, 50 for the regression benchmark).
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::approx_avg;
    int d = 1;
    KernelFamily kernel_family = KernelFamily::gaussian;
    double sigma = 0.0;
    std::vector<Sampler> samplers = {Sampler::mc, Sampler::halton, Sampler::sobol_owen};
    std::vector<int> m_grid = {16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
    int n_pairs = 0;
    int n_train = 2048;
    int n_test = 100000;
    int trials = 0;
    double r = 1.0;
    std::uint64_t master_seed = 42;
    int threads = 0;
    std::string out_path;
};

struct RunOutput {
    std::vector<ResultRecord> records;
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, double>> timings_ms;
    double sigma = 0.0; // resolved bandwidth
};

namespace detail {

inline bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

inline int log2_exact(int m) {
    if (!is_power_of_two(m)) throw config_error("M must be a power of 2, got " + std::to_string(m));
    int k = 0;
    while ((1 << k) < m) ++k;
    return k;
}

inline double median_of(std::vector<double> v) {
    const std::size_t lo = (v.size() - 1) / 2, hi = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
    const double a = v[lo];
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(hi), v.end());
    return 0.5 * (a + v[hi]);
}

// type-7 quantile (linear interpolation between order statistics)
inline double quantile_of(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double h = p * static_cast<double>(v.size() - 1);
    const std::size_t i = static_cast<std::size_t>(h);
    if (i + 1 >= v.size()) return v.back();
    return v[i] + (h - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

class ScopedTimer {
  public:
    ScopedTimer(RunOutput& out, std::string label)
        : out_(out), label_(std::move(label)), start_(std::chrono::steady_clock::now()) {}
    ~ScopedTimer() {
        const auto dt = std::chrono::steady_clock::now() - start_;
        out_.timings_ms.emplace_back(label_, std::chrono::duration<double, std::milli>(dt).count());
    }

  private:
    RunOutput& out_;
    std::string label_;
    std::chrono::steady_clock::time_point start_;
};

} // namespace detail

inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.d < 1) throw config_error("d must be >= 1");
    if (cfg.samplers.empty()) throw config_error("sampler list is empty");
    if (cfg.m_grid.empty()) throw config_error("M grid is empty");
    for (std::size_t i = 0; i < cfg.m_grid.size(); ++i) {
        if (!detail::is_power_of_two(cfg.m_grid[i])) throw config_error("M grid entries must be powers of 2");
        if (i > 0 && cfg.m_grid[i] <= cfg.m_grid[i - 1]) throw config_error("M grid must be strictly increasing");
    }
    if (cfg.trials < 0 || cfg.n_pairs < 0) throw config_error("counts must be nonnegative");
    if (cfg.experiment == ExperimentKind::krr_bench) {
        if (cfg.r != 0.5 && cfg.r != 1.0) throw config_error("krr_bench requires r in {0.5, 1.0}");
        if (cfg.n_train < 1 || cfg.n_test < 1) throw config_error("krr_bench requires n_train, n_test >= 1");
    }
}

inline int resolved_trials(const ExperimentConfig& cfg) {
    if (cfg.trials > 0) return cfg.trials;
    return cfg.experiment == ExperimentKind::krr_bench ? 50 : 100;
}

inline int resolved_n_pairs(const ExperimentConfig& cfg) {
    if (cfg.n_pairs > 0) return cfg.n_pairs;
    return cfg.experiment == ExperimentKind::approx_det ? 10000 : 1000;
}

inline double resolved_sigma(const ExperimentConfig& cfg) {
    if (cfg.sigma > 0.0) return cfg.sigma;
    return median_bandwidth(cfg.d, 1000000, cfg.master_seed);
}

// Uniform matrix on [0,1)^(rows x cols) from one derived stream.
inline Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    rng::Stream stream(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = stream.next_double();
    return m;
}

// One realized node set for a sampler. MC consumes the seed as its stream;
// sobol_owen / sobol_cp use it as the randomization seed; halton ignores it
// (one deterministic set, offset 1).
inline PointSet sampler_points(Sampler sampler, int M, int dims, std::uint64_t seed) {
    switch (sampler) {
        case Sampler::mc: {
            PointSet ps;
            ps.points = uniform_matrix(M, dims, seed);
            ps.meta = {GeneratorKind::mc, ScrambleKind::none, seed, 0};
            return ps;
        }
        case Sampler::halton: return halton_points(static_cast<std::uint64_t>(M), dims, 1);
        case Sampler::sobol_owen:
            return owen_scramble(sobol_points(detail::log2_exact(M), dims, 0), {ScrambleKind::owen_nested, seed, 53});
        case Sampler::sobol_cp: return cp_rotate(sobol_points(detail::log2_exact(M), dims, 0), seed);
    }
    throw config_error("unknown sampler");
}

// Least-squares slope of log2(err) against log2(M).
inline double fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw config_error("slope fit needs at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [m, err] : points) {
        if (!(err > 0.0)) throw numeric_error("slope fit requires positive error values");
        const double x = std::log2(m), y = std::log2(err);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double n = static_cast<double>(points.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Shared pair sample for the kernel-approximation protocols.
struct PairSet {
    Eigen::MatrixXd X;    // n_pairs x d
    Eigen::MatrixXd Xp;   // n_pairs x d
    Eigen::VectorXd exact; // K(x, x') per pair
};

inline PairSet make_pairs(int n_pairs, const KernelSpec& spec, std::uint64_t master_seed) {
    rng::Stream stream(rng::derive_seed(master_seed, {rng::kStreamPairs}));
    PairSet pairs;
    pairs.X.resize(n_pairs, spec.dim);
    pairs.Xp.resize(n_pairs, spec.dim);
    for (int i = 0; i < n_pairs; ++i) {
        for (int j = 0; j < spec.dim; ++j) pairs.X(i, j) = stream.next_double();
        for (int j = 0; j < spec.dim; ++j) pairs.Xp(i, j) = stream.next_double();
    }
    pairs.exact.resize(n_pairs);
    for (int i = 0; i < n_pairs; ++i) pairs.exact[i] = eval_kernel(spec, pairs.X.row(i), pairs.Xp.row(i));
    return pairs;
}

// Per-pair squared approximation errors of one feature bank.
inline Eigen::VectorXd pair_sq_errors(const FeatureBank& bank, const PairSet& pairs) {
    const Eigen::MatrixXd a = feature_matrix(bank, pairs.X);
    const Eigen::MatrixXd b = feature_matrix(bank, pairs.Xp);
    const Eigen::VectorXd km = (a.array() * b.array()).rowwise().sum();
    return (km - pairs.exact).array().square();
}

// All replicate results for one (sampler, M) cell. Halton is deterministic,
// so it gets a single replicate; the randomized samplers get `trials`
// independent banks with counter-derived seeds.
struct ApproxCell {
    Sampler sampler;
    int M = 0;
    int trials = 0;
    Eigen::VectorXd per_pair_mean;     // mean over replicates, per pair
    std::vector<double> per_trial_sup; // sup over pairs, per replicate
};

inline ApproxCell run_approx_cell(Sampler sampler, int M, const KernelSpec& spec, const PairSet& pairs,
                                  int trials, std::uint64_t master_seed, int threads) {
    const int reps = sampler == Sampler::halton ? 1 : trials;
    std::vector<Eigen::VectorXd> per_trial(static_cast<std::size_t>(reps));
    parallel_for(reps, threads, [&](int t) {
        const std::uint64_t seed = rng::derive_seed(
            master_seed, {rng::kStreamBank, static_cast<std::uint64_t>(sampler), static_cast<std::uint64_t>(t)});
        const FeatureBank bank = build_features(sampler_points(sampler, M, spec.dim + 1, seed), spec);
        per_trial[static_cast<std::size_t>(t)] = pair_sq_errors(bank, pairs);
    });

    ApproxCell cell{sampler, M, reps, Eigen::VectorXd::Zero(pairs.exact.size()), {}};
    cell.per_trial_sup.reserve(static_cast<std::size_t>(reps));
    for (const auto& v : per_trial) {
        cell.per_pair_mean += v;
        cell.per_trial_sup.push_back(v.maxCoeff());
    }
    cell.per_pair_mean /= static_cast<double>(reps);
    return cell;
}

// The three kernel-approximation protocols. Statistic per experiment:
//   approx_avg      mean over pairs of the replicate-averaged squared error
//   approx_sup_avg  sup over pairs of the replicate-averaged squared error
//   approx_det      sup over pairs of a single replicate's squared error
//                   (reported as the median over replicates)
// plus one fitted log2-log2 slope record per sampler when the grid allows.
inline RunOutput run_approx_error(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.experiment == ExperimentKind::krr_bench) throw config_error("run_approx_error: wrong experiment kind");
    RunOutput out;
    const double sigma = resolved_sigma(cfg);
    out.sigma = sigma;
    const KernelSpec spec{cfg.kernel_family, sigma, cfg.d};
    const int trials = resolved_trials(cfg);
    const int n_pairs = resolved_n_pairs(cfg);
    const PairSet pairs = make_pairs(n_pairs, spec, cfg.master_seed);
    const std::string exp_name = to_string(cfg.experiment);

    for (Sampler sampler : cfg.samplers) {
        std::vector<std::pair<double, double>> slope_points;
        for (int M : cfg.m_grid) {
            detail::ScopedTimer timer(out, std::string(to_string(sampler)) + "/M=" + std::to_string(M));
            const ApproxCell cell = run_approx_cell(sampler, M, spec, pairs, trials, cfg.master_seed, cfg.threads);
            double value = 0.0;
            std::string stat;
            switch (cfg.experiment) {
                case ExperimentKind::approx_avg:
                    stat = "mean_sq_err";
                    value = cell.per_pair_mean.mean();
                    break;
                case ExperimentKind::approx_sup_avg:
                    stat = "sup_mean_sq_err";
                    value = cell.per_pair_mean.maxCoeff();
                    break;
                default:
                    stat = "sup_sq_err";
                    value = detail::median_of(cell.per_trial_sup);
                    break;
            }
            slope_points.emplace_back(static_cast<double>(M), value);
            out.records.push_back({exp_name, to_string(sampler), cfg.d, M, stat, value, cell.trials, 0.0,
                                   cfg.master_seed});
        }
        if (slope_points.size() >= 3) {
            out.records.push_back({exp_name, to_string(sampler), cfg.d, 0, "loglog_slope",
                                   fit_loglog_slope(slope_points),
                                   sampler == Sampler::halton ? 1 : trials, 0.0, cfg.master_seed});
        } else {
            out.warnings.push_back(std::string("slope record skipped for ") + to_string(sampler) +
                                   ": M grid has fewer than 3 points");
        }
    }
    return out;
}

// Regression benchmark: one fixed noiseless test set, `trials` training
// realizations y = f(X) + N(0,1); exact KRR plus feature KRR per sampler and
// M, all at lambda = 0.25 n^(-1/(2r+1)). Reports mean and 25%/75% quantiles
// of test MSE against the noiseless targets.
inline RunOutput run_krr_bench(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.experiment != ExperimentKind::krr_bench) throw config_error("run_krr_bench: wrong experiment kind");
    RunOutput out;
    const double sigma = resolved_sigma(cfg);
    out.sigma = sigma;
    const KernelSpec spec{cfg.kernel_family, sigma, cfg.d};
    const int trials = resolved_trials(cfg);
    const double lambda = lambda_schedule(cfg.n_train, cfg.r, 0.25);
    const TargetFunction target = make_target(cfg.r, spec, 1000000, cfg.master_seed);

    Eigen::MatrixXd x_test;
    Eigen::VectorXd truth;
    {
        detail::ScopedTimer timer(out, "test_set");
        x_test = uniform_matrix(cfg.n_test, cfg.d, rng::derive_seed(cfg.master_seed, {rng::kStreamTest}));
        truth.resize(cfg.n_test);
        for (int i = 0; i < cfg.n_test; ++i) truth[i] = target(x_test.row(i).transpose());
    }

    // Halton banks are deterministic: build once per M and share.
    std::map<int, FeatureBank> halton_banks;
    for (Sampler s : cfg.samplers)
        if (s == Sampler::halton)
            for (int M : cfg.m_grid)
                halton_banks.emplace(M, build_features(sampler_points(Sampler::halton, M, cfg.d + 1, 0), spec));

    std::vector<double> mse_exact(static_cast<std::size_t>(trials));
    std::map<std::pair<int, int>, std::vector<double>> mse_feat; // (sampler idx, M) -> per-trial
    for (std::size_t si = 0; si < cfg.samplers.size(); ++si)
        for (int M : cfg.m_grid)
            mse_feat[{static_cast<int>(si), M}] = std::vector<double>(static_cast<std::size_t>(trials));

    {
        detail::ScopedTimer timer(out, "trials");
        parallel_for(trials, cfg.threads, [&](int t) {
            RegressionDataset data;
            data.X = uniform_matrix(cfg.n_train, cfg.d,
                                    rng::derive_seed(cfg.master_seed, {rng::kStreamTrain, static_cast<std::uint64_t>(t)}));
            Eigen::VectorXd f_train(cfg.n_train);
            for (int i = 0; i < cfg.n_train; ++i) f_train[i] = target(data.X.row(i).transpose());
            rng::Stream noise(rng::derive_seed(cfg.master_seed, {rng::kStreamNoise, static_cast<std::uint64_t>(t)}));
            data.y.resize(cfg.n_train);
            for (int i = 0; i < cfg.n_train; ++i) data.y[i] = f_train[i] + gaussian_quantile(noise.next_open());
            data.truth = f_train;

            mse_exact[static_cast<std::size_t>(t)] = test_mse(fit_exact(data, spec, lambda), x_test, truth);
            for (std::size_t si = 0; si < cfg.samplers.size(); ++si) {
                const Sampler sampler = cfg.samplers[si];
                for (int M : cfg.m_grid) {
                    const FeatureBank bank =
                        sampler == Sampler::halton
                            ? halton_banks.at(M)
                            : build_features(sampler_points(sampler, M, cfg.d + 1,
                                                            rng::derive_seed(cfg.master_seed,
                                                                             {rng::kStreamBank,
                                                                              static_cast<std::uint64_t>(sampler),
                                                                              static_cast<std::uint64_t>(t)})),
                                             spec);
                    mse_feat.at({static_cast<int>(si), M})[static_cast<std::size_t>(t)] =
                        test_mse(fit_features(data, bank, lambda), x_test, truth);
                }
            }
        });
    }

    const std::string exp_name = to_string(cfg.experiment);
    auto emit = [&](const std::string& sampler, int M, const std::vector<double>& v) {
        out.records.push_back({exp_name, sampler, cfg.d, M, "test_mse_mean", detail::mean_of(v),
                               static_cast<int>(v.size()), 0.0, cfg.master_seed});
        out.records.push_back({exp_name, sampler, cfg.d, M, "test_mse_q25", detail::quantile_of(v, 0.25),
                               static_cast<int>(v.size()), 0.0, cfg.master_seed});
        out.records.push_back({exp_name, sampler, cfg.d, M, "test_mse_q75", detail::quantile_of(v, 0.75),
                               static_cast<int>(v.size()), 0.0, cfg.master_seed});
    };
    emit("exact", 0, mse_exact);
    for (std::size_t si = 0; si < cfg.samplers.size(); ++si)
        for (int M : cfg.m_grid) emit(to_string(cfg.samplers[si]), M, mse_feat.at({static_cast<int>(si), M}));
    return out;
}

} // namespace qmcrf
