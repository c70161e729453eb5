#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "qmcrf/errors.hpp"
#include "qmcrf/feature_map.hpp"
#include "qmcrf/point_set.hpp"

namespace qmcrf {

// Shortest decimal representation that round-trips the double. Locale
// independent ('.' decimal separator) by construction of to_chars.
inline std::string format_shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// 17 significant digits; enough to round-trip any double.
inline std::string format_sig17(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file: " + path);
    return out;
}

// CSV with header x1,...,xs, one point per row.
inline void write_points_csv(const std::string& path, const PointSet& ps) {
    auto out = open_out(path);
    for (Eigen::Index j = 0; j < ps.dim(); ++j) out << (j ? ",x" : "x") << (j + 1);
    out << "\n";
    for (Eigen::Index i = 0; i < ps.count(); ++i) {
        for (Eigen::Index j = 0; j < ps.dim(); ++j) {
            if (j) out << ',';
            out << format_sig17(ps.points(i, j));
        }
        out << "\n";
    }
}

// CSV with header w1,...,wd,b: one feature (frequency row + phase) per row.
inline void write_bank_csv(const std::string& path, const FeatureBank& bank) {
    auto out = open_out(path);
    for (int j = 0; j < bank.kernel.dim; ++j) out << (j ? ",w" : "w") << (j + 1);
    out << ",b\n";
    for (Eigen::Index i = 0; i < bank.size(); ++i) {
        for (int j = 0; j < bank.kernel.dim; ++j) {
            if (j) out << ',';
            out << format_sig17(bank.frequencies(i, j));
        }
        out << ',' << format_sig17(bank.phases[i]) << "\n";
    }
}

// Debug export for dense matrices (e.g. Gram matrices): c1,...,cn header,
// one row per line.
inline void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
    auto out = open_out(path);
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? ",c" : "c") << (j + 1);
    out << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_sig17(m(i, j));
        }
        out << "\n";
    }
}

struct ResultRecord {
    std::string experiment;
    std::string sampler;
    int d = 0;
    int M = 0;
    std::string statistic;
    double value = 0.0;
    int trials = 0;
    double wall_ms = 0.0; // kept at 0 in CSV output; real timings go to the sidecar
    std::uint64_t seed = 0;
};

inline void write_results_csv(const std::string& path, const std::vector<ResultRecord>& records) {
    auto out = open_out(path);
    out << "experiment,sampler,d,M,statistic,value,trials,wall_ms,seed\n";
    for (const auto& r : records) {
        out << r.experiment << ',' << r.sampler << ',' << r.d << ',' << r.M << ',' << r.statistic << ','
            << format_shortest(r.value) << ',' << r.trials << ',' << format_shortest(r.wall_ms) << ',' << r.seed
            << "\n";
    }
}

} // namespace qmcrf
