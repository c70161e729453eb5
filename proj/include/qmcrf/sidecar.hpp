#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "qmcrf/experiment.hpp"
#include "qmcrf/version.hpp"

namespace qmcrf {

// Sidecar metadata written next to each results CSV: the fully resolved
// configuration, library version, warnings, and wall-clock timings. The CSV
// itself stays a pure function of the config; timings live only here.
inline void write_sidecar_json(const std::string& path, const ExperimentConfig& cfg, const RunOutput& out) {
    nlohmann::json j;
    j["library"] = "qmcrf";
    j["version"] = kVersion;
    j["experiment"] = to_string(cfg.experiment);
    j["d"] = cfg.d;
    j["kernel"] = to_string(cfg.kernel_family);
    j["sigma_resolved"] = out.sigma;
    j["sigma_requested"] = cfg.sigma;
    std::vector<std::string> samplers;
    for (Sampler s : cfg.samplers) samplers.emplace_back(to_string(s));
    j["samplers"] = samplers;
    j["m_grid"] = cfg.m_grid;
    j["n_pairs"] = resolved_n_pairs(cfg);
    j["n_train"] = cfg.n_train;
    j["n_test"] = cfg.n_test;
    j["trials"] = resolved_trials(cfg);
    j["r"] = cfg.r;
    j["master_seed"] = cfg.master_seed;
    j["threads"] = cfg.threads;
    j["out"] = cfg.out_path;
    j["warnings"] = out.warnings;
    nlohmann::json timings = nlohmann::json::object();
    for (const auto& [label, ms] : out.timings_ms) timings[label] = ms;
    j["timings_ms"] = timings;

    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open sidecar file: " + path);
    f << j.dump(2) << "\n";
}

} // namespace qmcrf
