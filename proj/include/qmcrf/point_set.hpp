#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "qmcrf/errors.hpp"

namespace qmcrf {

enum class GeneratorKind { mc, sobol, halton };
enum class ScrambleKind { none, owen_nested, cp_rotation };

inline const char* to_string(GeneratorKind g) {
    switch (g) {
        case GeneratorKind::mc: return "mc";
        case GeneratorKind::sobol: return "sobol";
        case GeneratorKind::halton: return "halton";
    }
    return "?";
}

inline const char* to_string(ScrambleKind s) {
    switch (s) {
        case ScrambleKind::none: return "none";
        case ScrambleKind::owen_nested: return "owen";
        case ScrambleKind::cp_rotation: return "cp";
    }
    return "?";
}

struct PointSetMeta {
    GeneratorKind generator = GeneratorKind::mc;
    ScrambleKind scramble = ScrambleKind::none;
    std::uint64_t seed = 0;
    std::uint64_t index_offset = 0;
};

// A finite point set in [0,1)^s. Immutable by convention after construction;
// regenerating with identical meta yields a bit-identical matrix.
struct PointSet {
    Eigen::MatrixXd points; // M rows, s columns
    PointSetMeta meta;

    Eigen::Index count() const { return points.rows(); }
    Eigen::Index dim() const { return points.cols(); }
};

struct NetParams {
    int base = 2;
    int t = 0;
    int m = 0;
    int s = 1;
};

struct ScrambleSpec {
    ScrambleKind kind = ScrambleKind::none;
    std::uint64_t seed = 0;
    int digit_depth = 53; // number of base-2 digits randomized
};

inline void check_point_set(const PointSet& ps) {
    if (ps.count() < 1 || ps.dim() < 1) throw config_error("point set must have M >= 1, s >= 1");
    for (Eigen::Index i = 0; i < ps.count(); ++i)
        for (Eigen::Index j = 0; j < ps.dim(); ++j) {
            const double e = ps.points(i, j);
            if (!(e >= 0.0 && e < 1.0)) throw numeric_error("point coordinate outside [0,1)");
        }
}

} // namespace qmcrf
