#pragma once

#include <cstdint>
#include <vector>

#include "tclswarm/ensemble.hpp"

namespace tclswarm {

/// Empirical map from offset spacing alpha to normalized power reduction,
/// sampled on an even grid over [0, 2pi/n] for one population.
struct DelayTableRow {
    double alpha_rad = 0.0;
    double p_norm_pct = 0.0;
};

struct DelayTable {
    std::size_t n = 0;
    double rated_power_kw = 0.0; ///< sum of rated powers of the population
    std::vector<DelayTableRow> rows;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;

    void validate() const; ///< rows sorted ascending, alpha within [0, 2pi/n]
    [[nodiscard]] double min_p_norm() const;
    [[nodiscard]] double max_p_norm() const;
};

/// Sweeps grid_size offset spacings evenly over [0, 2pi/n]. Every grid
/// point simulates the post-consensus state (frequencies settled to the
/// population mean), discards three mean periods and measures the RMS
/// aggregate over the following two. Row k records the reduction relative
/// to the zero-offset baseline. Requires the distributed-averaging protocol.
[[nodiscard]] DelayTable build_delay_table(const PopulationConfig& cfg, std::size_t grid_size);

struct AlphaLookup {
    double alpha_rad = 0.0;
    bool clamped = false; ///< target was outside the achievable reduction range
};

/// Offset of the row whose reduction is nearest the target, ties broken
/// toward smaller alpha.
[[nodiscard]] AlphaLookup lookup_alpha(const DelayTable& table, double target_p_norm_pct);

/// Piecewise-constant utility reference.
struct ReferenceSegment {
    double start_s = 0.0;
    double target_p_norm_pct = 0.0;
};

struct ReferenceSchedule {
    std::vector<ReferenceSegment> segments;
    void validate() const; ///< non-empty, starts strictly increasing from 0
};

struct LoadFollowResult {
    SimResult sim;
    struct Applied {
        double start_s = 0.0;
        double target_p_norm_pct = 0.0;
        double alpha_rad = 0.0;
        bool clamped = false;
    };
    std::vector<Applied> segments;
};

/// Tracks the reference by re-spacing the population offsets at each
/// segment boundary to the table lookup of the segment target. Phases are
/// never re-randomized; frequencies stay at the consensus mean throughout.
[[nodiscard]] LoadFollowResult load_follow(const PopulationConfig& cfg, const DelayTable& table,
                                           const ReferenceSchedule& schedule, double duration_s,
                                           double dt_s);

/// Step size used by the sweep and controller when the caller does not pin
/// one: min(1 s, shortest cycle phase / 10).
[[nodiscard]] double default_step_s(const Population& pop);

} // namespace tclswarm
