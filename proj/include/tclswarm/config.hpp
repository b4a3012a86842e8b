#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tclswarm/dataset.hpp"
#include "tclswarm/ensemble.hpp"
#include "tclswarm/mlp.hpp"

namespace tclswarm {

struct RunSettings {
    double duration_s = 10000.0;
    double dt_s = 1.0;
};

struct SweepSettings {
    std::size_t grid_size = 100;
};

struct TrainSettings {
    std::size_t epochs = 100;
    std::size_t batch_size = 256;
    double learning_rate = 0.01;
    std::size_t patience = 10;
    double val_fraction = 0.1;
    double split_ratio = 0.7;
};

/// Everything a config file can express. Sections the file omits keep
/// their defaults; `has_population` records whether [population] appeared
/// (dataset sweeps fall back to their own template otherwise).
struct FullConfig {
    PopulationConfig population;
    bool has_population = false;
    RunSettings run;
    SweepSettings sweep;
    DatasetOptions dataset;
    TrainSettings train;

    // raw schedule keys; resolved against the run duration
    double consensus_start_s = -1.0;
    double desync_start_s = -1.0;
    double alpha_scale = -1.0;

    /// Builds population.phase_schedule from the schedule keys (thirds of
    /// the duration where unset). No-op when no schedule key appeared.
    void resolve_schedule();

    /// Canonical key=value lines of every resolved setting, for manifests
    /// and content hashing.
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> snapshot() const;
};

/// Parses the line-oriented `key = value` format with [section] headers.
/// Full-line comments start with '#' or ';'. Unknown sections or keys are
/// hard errors carrying the file name and line number.
[[nodiscard]] FullConfig parse_config_file(const std::string& path);

/// Same parser over an in-memory string (the name is used in diagnostics).
[[nodiscard]] FullConfig parse_config_text(const std::string& text, const std::string& name);

} // namespace tclswarm
