#include "tclswarm/delay.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tclswarm/errors.hpp"
#include "tclswarm/metrics.hpp"
#include "tclswarm/oscillator.hpp"

namespace tclswarm {

void DelayTable::validate() const {
    if (n == 0) throw ConfigError("delay table has no population");
    if (rows.size() < 2) throw ConfigError("delay table needs at least two rows");
    const double alpha_cap = kTwoPi / static_cast<double>(n) * (1.0 + 1e-12);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].alpha_rad < 0.0 || rows[k].alpha_rad > alpha_cap) {
            throw ConfigError("delay table offset outside [0, 2pi/n]");
        }
        if (k > 0 && !(rows[k].alpha_rad > rows[k - 1].alpha_rad)) {
            throw ConfigError("delay table offsets must be strictly increasing");
        }
    }
}

double DelayTable::min_p_norm() const {
    double lo = rows.front().p_norm_pct;
    for (const auto& r : rows) lo = std::min(lo, r.p_norm_pct);
    return lo;
}

double DelayTable::max_p_norm() const {
    double hi = rows.front().p_norm_pct;
    for (const auto& r : rows) hi = std::max(hi, r.p_norm_pct);
    return hi;
}

double default_step_s(const Population& pop) {
    return std::min(1.0, pop.min_phase_time_s() / 10.0);
}

DelayTable build_delay_table(const PopulationConfig& cfg, std::size_t grid_size) {
    cfg.validate();
    if (grid_size < 2) throw ConfigError("delay table grid needs at least two points");
    if (cfg.protocol != Protocol::DistributedAveraging) {
        throw ConfigError("delay table requires the distributed-averaging protocol");
    }

    const Population pop = sample_population(cfg);
    const double dt = default_step_s(pop);
    const double period = pop.mean_period_s();
    const auto settle_steps = static_cast<std::size_t>(std::ceil(3.0 * period / dt));
    const auto measure_steps = static_cast<std::size_t>(std::ceil(2.0 * period / dt));
    const double spacing_cap = kTwoPi / static_cast<double>(cfg.n);

    std::vector<double> rms_at(grid_size, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t gp = 0; gp < static_cast<std::ptrdiff_t>(grid_size); ++gp) {
        const auto k = static_cast<std::size_t>(gp);
        const double spacing =
            spacing_cap * static_cast<double>(k) / static_cast<double>(grid_size - 1);
        EnsembleEngine engine(pop, cfg, dt);
        engine.settle_frequencies_to_mean();
        engine.set_offset_spacing(spacing);
        for (std::size_t s = 0; s < settle_steps; ++s) engine.step();
        Series window;
        window.dt_s = dt;
        window.values.reserve(measure_steps);
        for (std::size_t s = 0; s < measure_steps; ++s) {
            window.values.push_back(engine.step().p_agg_kw);
        }
        rms_at[k] = rms(window);
    }

    DelayTable table;
    table.n = cfg.n;
    table.rated_power_kw = pop.total_rated_power_kw();
    table.config_hash = cfg.content_hash();
    table.seed = cfg.seed;
    table.rows.reserve(grid_size);
    const double baseline = rms_at[0];
    for (std::size_t k = 0; k < grid_size; ++k) {
        const double spacing =
            spacing_cap * static_cast<double>(k) / static_cast<double>(grid_size - 1);
        table.rows.push_back({spacing, p_norm(baseline, rms_at[k])});
    }
    table.validate();
    return table;
}

AlphaLookup lookup_alpha(const DelayTable& table, double target_p_norm_pct) {
    table.validate();
    AlphaLookup result;
    double best = std::abs(table.rows.front().p_norm_pct - target_p_norm_pct);
    result.alpha_rad = table.rows.front().alpha_rad;
    for (const auto& row : table.rows) {
        const double dist = std::abs(row.p_norm_pct - target_p_norm_pct);
        if (dist < best) {
            best = dist;
            result.alpha_rad = row.alpha_rad;
        }
    }
    result.clamped =
        target_p_norm_pct < table.min_p_norm() || target_p_norm_pct > table.max_p_norm();
    return result;
}

void ReferenceSchedule::validate() const {
    if (segments.empty()) throw ConfigError("reference schedule is empty");
    if (segments.front().start_s != 0.0) {
        throw ConfigError("reference schedule must start at t = 0");
    }
    for (std::size_t k = 1; k < segments.size(); ++k) {
        if (!(segments[k].start_s > segments[k - 1].start_s)) {
            std::ostringstream oss;
            oss << "reference schedule start times must be strictly increasing (segment " << k
                << ")";
            throw ConfigError(oss.str());
        }
    }
}

LoadFollowResult load_follow(const PopulationConfig& cfg, const DelayTable& table,
                             const ReferenceSchedule& schedule, double duration_s, double dt_s) {
    cfg.validate();
    table.validate();
    schedule.validate();
    if (cfg.protocol != Protocol::DistributedAveraging) {
        throw ConfigError("load following requires the distributed-averaging protocol");
    }
    if (table.n != cfg.n) throw ConfigError("delay table was built for a different population size");
    if (!(duration_s > 0.0)) throw ConfigError("duration must be positive");
    if (schedule.segments.back().start_s >= duration_s) {
        throw ConfigError("reference schedule extends beyond the run duration");
    }

    const Population pop = sample_population(cfg);
    EnsembleEngine engine(pop, cfg, dt_s);
    engine.settle_frequencies_to_mean();

    LoadFollowResult result;
    result.sim.dt_s = dt_s;
    result.sim.power_cap_kw = engine.power_cap_kw();
    const auto steps = static_cast<std::size_t>(duration_s / dt_s);
    result.sim.time_s.reserve(steps);
    result.sim.p_agg_kw.reserve(steps);
    result.sim.f_mean_hz.reserve(steps);

    std::size_t next_segment = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt_s;
        while (next_segment < schedule.segments.size() &&
               t >= schedule.segments[next_segment].start_s) {
            const ReferenceSegment& seg = schedule.segments[next_segment];
            const AlphaLookup pick = lookup_alpha(table, seg.target_p_norm_pct);
            engine.set_offset_spacing(pick.alpha_rad);
            result.segments.push_back(
                {seg.start_s, seg.target_p_norm_pct, pick.alpha_rad, pick.clamped});
            result.sim.regimes.push_back({seg.start_s, Regime::Desynchronized});
            ++next_segment;
        }
        const auto sample = engine.step();
        result.sim.time_s.push_back(t);
        result.sim.p_agg_kw.push_back(sample.p_agg_kw);
        result.sim.f_mean_hz.push_back(sample.f_mean_hz);
    }
    result.sim.max_comfort_overshoot_c = engine.max_comfort_overshoot_c();
    result.sim.comfort_bound_c = engine.comfort_bound_c();
    return result;
}

} // namespace tclswarm
