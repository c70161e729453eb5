// qmcrf benchmark CLI: point-set generation, feature generation, star
// discrepancy reports, kernel-approximation error sweeps and the KRR
// benchmark. Every subcommand accepts --config <file> with flat key=value
// lines; command-line flags override file values.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qmcrf/qmcrf.hpp"
#include "qmcrf/sidecar.hpp"

namespace {

using namespace qmcrf;

// Flat key=value config support: values from the file are appended as
// "--key value" tokens for every flag the user did not pass explicitly, so
// command-line flags always override the file. '#' starts a comment.
std::vector<std::string> expand_config_tokens(std::vector<std::string> tokens) {
    std::string path;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] == "--config" && i + 1 < tokens.size())
            path = tokens[i + 1];
        else if (tokens[i].rfind("--config=", 0) == 0)
            path = tokens[i].substr(9);
    }
    if (path.empty()) return tokens;
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);

    auto has_flag = [&](const std::string& flag) {
        for (const auto& t : tokens)
            if (t == flag || t.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw config_error("config line is not key=value: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw config_error("config line has empty key: " + line);
        if (!has_flag("--" + key)) {
            tokens.push_back("--" + key);
            tokens.push_back(value);
        }
    }
    return tokens;
}

void add_config_option(CLI::App* sub) {
    static std::string sink;
    sub->add_option("--config", sink, "flat key=value file; flags override file values");
}

struct GenPointsArgs {
    std::string gen = "sobol";
    int m = 4;
    int count = 0; // halton point count
    int dim = 1;
    std::string scramble = "none";
    std::uint64_t seed = 0;
    long long offset = -1; // -1: generator default (sobol 0, halton 1)
    std::string out;
};

PointSet generate_points(const GenPointsArgs& a) {
    ScrambleSpec spec;
    spec.seed = a.seed;
    if (a.scramble == "none")
        spec.kind = ScrambleKind::none;
    else if (a.scramble == "owen")
        spec.kind = ScrambleKind::owen_nested;
    else if (a.scramble == "cp")
        spec.kind = ScrambleKind::cp_rotation;
    else
        throw config_error("unknown scramble: " + a.scramble);

    PointSet ps;
    if (a.gen == "sobol") {
        const std::uint64_t offset = a.offset < 0 ? 0 : static_cast<std::uint64_t>(a.offset);
        ps = sobol_points(a.m, a.dim, offset);
    } else if (a.gen == "halton") {
        if (spec.kind == ScrambleKind::owen_nested)
            throw config_error("owen scramble requires base-2 digital-net input; halton is not one");
        const std::uint64_t offset = a.offset < 0 ? 1 : static_cast<std::uint64_t>(a.offset);
        const std::uint64_t count = a.count > 0 ? static_cast<std::uint64_t>(a.count) : (1ull << a.m);
        ps = halton_points(count, a.dim, offset);
    } else {
        throw config_error("unknown generator: " + a.gen);
    }
    return apply_scramble(ps, spec);
}

void add_gen_points(CLI::App& app, int& rc) {
    auto args = std::make_shared<GenPointsArgs>();
    CLI::App* sub = app.add_subcommand("gen-points", "Generate a low-discrepancy or MC point set as CSV");
    add_config_option(sub);
    sub->add_option("--gen", args->gen, "Generator: sobol|halton")->check(CLI::IsMember({"sobol", "halton"}));
    sub->add_option("--m", args->m, "log2 point count (sobol)");
    sub->add_option("--count", args->count, "point count (halton)");
    sub->add_option("--dim", args->dim, "dimension")->required();
    sub->add_option("--scramble", args->scramble, "none|owen|cp")->check(CLI::IsMember({"none", "owen", "cp"}));
    sub->add_option("--seed", args->seed, "scramble seed");
    sub->add_option("--offset", args->offset, "index offset (default: sobol 0, halton 1)");
    sub->add_option("--out", args->out, "output CSV path")->required();
    sub->callback([args, &rc] {
        const PointSet ps = generate_points(*args);
        write_points_csv(args->out, ps);
        std::cout << "wrote " << ps.count() << " points (dim " << ps.dim() << ") to " << args->out << "\n";
        rc = 0;
    });
}

struct GenFeaturesArgs {
    std::string kernel = "gaussian";
    double sigma = 1.0;
    int dim = 1;
    int m = 64; // feature count M
    std::string sampler = "sobol-owen";
    std::uint64_t seed = 0;
    std::string out;
};

void add_gen_features(CLI::App& app, int& rc) {
    auto args = std::make_shared<GenFeaturesArgs>();
    CLI::App* sub = app.add_subcommand("gen-features", "Generate a random-feature bank (frequencies + phases) as CSV");
    add_config_option(sub);
    sub->add_option("--kernel", args->kernel, "gaussian|laplacian|cauchy")
        ->check(CLI::IsMember({"gaussian", "laplacian", "cauchy"}));
    sub->add_option("--sigma", args->sigma, "kernel bandwidth")->required();
    sub->add_option("--dim", args->dim, "kernel dimension")->required();
    sub->add_option("--m", args->m, "number of features M")->required();
    sub->add_option("--sampler", args->sampler, "mc|halton|sobol-owen|sobol-cp");
    sub->add_option("--seed", args->seed, "sampler seed");
    sub->add_option("--out", args->out, "output CSV path")->required();
    sub->callback([args, &rc] {
        KernelFamily family = KernelFamily::gaussian;
        if (args->kernel == "laplacian") family = KernelFamily::laplacian;
        if (args->kernel == "cauchy") family = KernelFamily::cauchy;
        const KernelSpec spec{family, args->sigma, args->dim};
        const FeatureBank bank =
            build_features(sampler_points(parse_sampler(args->sampler), args->m, args->dim + 1, args->seed), spec);
        write_bank_csv(args->out, bank);
        std::cout << "wrote " << bank.size() << " features to " << args->out << "\n";
        rc = 0;
    });
}

struct ApproxArgs {
    std::string exp = "avg";
    int d = 1;
    std::string kernel = "gaussian";
    double sigma = 0.0;
    std::vector<std::string> samplers = {"mc", "halton", "sobol-owen"};
    std::vector<int> m_grid = {16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
    int pairs = 0;
    int trials = 0;
    std::uint64_t seed = 42;
    int threads = 0;
    std::string out;
};

ExperimentConfig to_config(const ApproxArgs& a) {
    ExperimentConfig cfg;
    if (a.exp == "avg")
        cfg.experiment = ExperimentKind::approx_avg;
    else if (a.exp == "sup-avg")
        cfg.experiment = ExperimentKind::approx_sup_avg;
    else if (a.exp == "det")
        cfg.experiment = ExperimentKind::approx_det;
    else
        throw config_error("unknown experiment: " + a.exp);
    cfg.d = a.d;
    if (a.kernel == "gaussian")
        cfg.kernel_family = KernelFamily::gaussian;
    else if (a.kernel == "laplacian")
        cfg.kernel_family = KernelFamily::laplacian;
    else if (a.kernel == "cauchy")
        cfg.kernel_family = KernelFamily::cauchy;
    else
        throw config_error("unknown kernel: " + a.kernel);
    cfg.sigma = a.sigma;
    cfg.samplers.clear();
    for (const auto& s : a.samplers) cfg.samplers.push_back(parse_sampler(s));
    cfg.m_grid = a.m_grid;
    cfg.n_pairs = a.pairs;
    cfg.trials = a.trials;
    cfg.master_seed = a.seed;
    cfg.threads = a.threads;
    cfg.out_path = a.out;
    return cfg;
}

void add_approx_error(CLI::App& app, int& rc) {
    auto args = std::make_shared<ApproxArgs>();
    CLI::App* sub = app.add_subcommand("approx-error", "Kernel-approximation error sweep over M");
    add_config_option(sub);
    sub->add_option("--exp", args->exp, "avg|sup-avg|det")->check(CLI::IsMember({"avg", "sup-avg", "det"}));
    sub->add_option("--d", args->d, "data dimension");
    sub->add_option("--kernel", args->kernel, "gaussian|laplacian|cauchy");
    sub->add_option("--sigma", args->sigma, "bandwidth (0 = median heuristic)");
    sub->add_option("--samplers", args->samplers, "comma list of mc,halton,sobol-owen,sobol-cp")->delimiter(',');
    sub->add_option("--m-grid", args->m_grid, "comma list of feature counts (powers of 2)")->delimiter(',');
    sub->add_option("--pairs", args->pairs, "number of (x,x') pairs (0 = protocol default)");
    sub->add_option("--trials", args->trials, "replicates per sampler (0 = default 100)");
    sub->add_option("--seed", args->seed, "master seed");
    sub->add_option("--threads", args->threads, "worker threads (0 = hardware)");
    sub->add_option("--out", args->out, "output CSV path")->required();
    sub->callback([args, &rc] {
        const ExperimentConfig cfg = to_config(*args);
        const RunOutput out = run_approx_error(cfg);
        write_results_csv(cfg.out_path, out.records);
        write_sidecar_json(cfg.out_path + ".meta.json", cfg, out);
        for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << "wrote " << out.records.size() << " records to " << cfg.out_path << "\n";
        rc = 0;
    });
}

struct KrrArgs {
    int d = 2;
    double r = 1.0;
    std::string kernel = "gaussian";
    double sigma = 0.0;
    int n_train = 2048;
    int n_test = 100000;
    int trials = 0;
    std::vector<std::string> samplers = {"mc", "halton", "sobol-owen"};
    std::vector<int> m_grid = {16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
    std::uint64_t seed = 42;
    int threads = 0;
    std::string out;
};

void add_krr_bench(CLI::App& app, int& rc) {
    auto args = std::make_shared<KrrArgs>();
    CLI::App* sub = app.add_subcommand("krr-bench", "Kernel ridge regression benchmark (exact vs feature estimators)");
    add_config_option(sub);
    sub->add_option("--d", args->d, "data dimension");
    sub->add_option("--r", args->r, "target smoothness: 0.5 or 1.0");
    sub->add_option("--kernel", args->kernel, "gaussian|laplacian|cauchy");
    sub->add_option("--sigma", args->sigma, "bandwidth (0 = median heuristic)");
    sub->add_option("--n-train", args->n_train, "training set size per trial");
    sub->add_option("--n-test", args->n_test, "fixed test set size");
    sub->add_option("--trials", args->trials, "training realizations (0 = default 50)");
    sub->add_option("--samplers", args->samplers, "comma list of mc,halton,sobol-owen,sobol-cp")->delimiter(',');
    sub->add_option("--m-grid", args->m_grid, "comma list of feature counts (powers of 2)")->delimiter(',');
    sub->add_option("--seed", args->seed, "master seed");
    sub->add_option("--threads", args->threads, "worker threads (0 = hardware)");
    sub->add_option("--out", args->out, "output CSV path")->required();
    sub->callback([args, &rc] {
        ApproxArgs shim;
        shim.d = args->d;
        shim.kernel = args->kernel;
        shim.sigma = args->sigma;
        shim.samplers = args->samplers;
        shim.m_grid = args->m_grid;
        shim.trials = args->trials;
        shim.seed = args->seed;
        shim.threads = args->threads;
        shim.out = args->out;
        ExperimentConfig cfg = to_config(shim);
        cfg.experiment = ExperimentKind::krr_bench;
        cfg.r = args->r;
        cfg.n_train = args->n_train;
        cfg.n_test = args->n_test;
        const RunOutput out = run_krr_bench(cfg);
        write_results_csv(cfg.out_path, out.records);
        write_sidecar_json(cfg.out_path + ".meta.json", cfg, out);
        std::cout << "wrote " << out.records.size() << " records to " << cfg.out_path << "\n";
        rc = 0;
    });
}

PointSet read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open points file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty points file");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw config_error("points file has no rows");
    PointSet ps;
    ps.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw config_error("ragged points file");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            ps.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return ps;
}

struct DiscArgs {
    std::string in;
    GenPointsArgs gen;
    std::string mode = "exact";
    int probes = 10000;
    std::uint64_t probe_seed = 1;
    std::string out;
};

void add_discrepancy(CLI::App& app, int& rc) {
    auto args = std::make_shared<DiscArgs>();
    CLI::App* sub = app.add_subcommand("discrepancy", "Star discrepancy of a point set (exact or lower bound)");
    add_config_option(sub);
    sub->add_option("--in", args->in, "points CSV (as written by gen-points)");
    sub->add_option("--gen", args->gen.gen, "generator when no --in given: sobol|halton");
    sub->add_option("--m", args->gen.m, "log2 point count (sobol)");
    sub->add_option("--count", args->gen.count, "point count (halton)");
    sub->add_option("--dim", args->gen.dim, "dimension");
    sub->add_option("--scramble", args->gen.scramble, "none|owen|cp");
    sub->add_option("--seed", args->gen.seed, "scramble seed");
    sub->add_option("--offset", args->gen.offset, "index offset");
    sub->add_option("--mode", args->mode, "exact|lower")->check(CLI::IsMember({"exact", "lower"}));
    sub->add_option("--probes", args->probes, "random probe boxes for lower bound");
    sub->add_option("--probe-seed", args->probe_seed, "probe seed for lower bound");
    sub->add_option("--out", args->out, "optional CSV output (value,exact,boxes)");
    sub->callback([args, &rc] {
        const PointSet ps = args->in.empty() ? generate_points(args->gen) : read_points_csv(args->in);
        const DiscrepancyReport rep = args->mode == "exact"
                                          ? star_discrepancy_exact(ps)
                                          : star_discrepancy_lower_bound(ps, args->probes, args->probe_seed);
        std::cout << "star_discrepancy value=" << format_shortest(rep.value) << " exact=" << (rep.exact ? 1 : 0)
                  << " boxes_examined=" << rep.boxes_examined << "\n";
        if (!args->out.empty()) {
            auto f = open_out(args->out);
            f << "value,exact,boxes_examined\n"
              << format_shortest(rep.value) << ',' << (rep.exact ? 1 : 0) << ',' << rep.boxes_examined << "\n";
        }
        rc = 0;
    });
}

struct KrrFitArgs {
    std::string mode = "exact";
    int d = 1;
    double r = 1.0;
    int n = 256;
    int m = 64;
    std::uint64_t seed = 42;
    std::string out;
};

void add_krr_fit(CLI::App& app, int& rc) {
    auto args = std::make_shared<KrrFitArgs>();
    CLI::App* sub = app.add_subcommand("krr-fit", "Fit one KRR model on synthetic data; export coefficients (debug)");
    add_config_option(sub);
    sub->add_option("--mode", args->mode, "exact|mc|halton|sobol-owen|sobol-cp");
    sub->add_option("--d", args->d, "data dimension");
    sub->add_option("--r", args->r, "target smoothness: 0.5 or 1.0");
    sub->add_option("--n", args->n, "training set size");
    sub->add_option("--m", args->m, "feature count (feature modes)");
    sub->add_option("--seed", args->seed, "master seed");
    sub->add_option("--out", args->out, "coefficient CSV path")->required();
    sub->callback([args, &rc] {
        const double sigma = median_bandwidth(args->d, 1000000, args->seed);
        const KernelSpec spec{KernelFamily::gaussian, sigma, args->d};
        const TargetFunction target = make_target(args->r, spec, 1000000, args->seed);
        RegressionDataset data;
        data.X = uniform_matrix(args->n, args->d, rng::derive_seed(args->seed, {rng::kStreamTrain, 0}));
        rng::Stream noise(rng::derive_seed(args->seed, {rng::kStreamNoise, 0}));
        data.y.resize(args->n);
        for (int i = 0; i < args->n; ++i)
            data.y[i] = target(data.X.row(i).transpose()) + gaussian_quantile(noise.next_open());
        const double lambda = lambda_schedule(args->n, args->r, 0.25);

        KrrModel model;
        if (args->mode == "exact") {
            model = fit_exact(data, spec, lambda);
        } else {
            const FeatureBank bank = build_features(
                sampler_points(parse_sampler(args->mode), args->m, args->d + 1,
                               rng::derive_seed(args->seed, {rng::kStreamBank, 0, 0})),
                spec);
            model = fit_features(data, bank, lambda);
        }
        auto f = open_out(args->out);
        f << "coef\n";
        for (Eigen::Index i = 0; i < model.coef.size(); ++i) f << format_sig17(model.coef[i]) << "\n";
        std::cout << "mode=" << args->mode << " lambda=" << format_shortest(lambda)
                  << " residual=" << format_shortest(model.fit_residual) << " coefs=" << model.coef.size() << "\n";
        rc = 0;
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qmcrf: randomized quasi-Monte Carlo random features benchmark"};
    app.require_subcommand(1);
    int rc = 0;
    add_gen_points(app, rc);
    add_gen_features(app, rc);
    add_approx_error(app, rc);
    add_krr_bench(app, rc);
    add_discrepancy(app, rc);
    add_krr_fit(app, rc);

    try {
        std::vector<std::string> tokens(argv + 1, argv + argc);
        tokens = expand_config_tokens(std::move(tokens));
        std::reverse(tokens.begin(), tokens.end()); // CLI11 consumes back to front
        app.parse(std::move(tokens));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const qmcrf::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}
