#include "tclswarm/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tclswarm/consensus.hpp"
#include "tclswarm/errors.hpp"
#include "tclswarm/oscillator.hpp"
#include "tclswarm/rng.hpp"

namespace tclswarm {

std::string to_string(Protocol p) {
    switch (p) {
    case Protocol::DistributedAveraging: return "distributed-averaging";
    case Protocol::Kuramoto: return "kuramoto";
    case Protocol::None: return "none";
    }
    return "unknown";
}

std::string to_string(Regime r) {
    switch (r) {
    case Regime::Random: return "random";
    case Regime::Consensus: return "consensus";
    case Regime::Desynchronized: return "desynchronized";
    }
    return "unknown";
}

void PopulationConfig::validate() const {
    std::ostringstream oss;
    if (n < 1) throw ConfigError("population count must be at least 1");
    auto check_range = [&](double lo, double hi, const char* name) {
        if (!(lo <= hi)) {
            oss << name << " range is empty: [" << lo << ", " << hi << "]";
            throw ConfigError(oss.str());
        }
    };
    check_range(power_min_kw, power_max_kw, "power");
    check_range(duty_min, duty_max, "duty");
    check_range(freq_min_hz, freq_max_hz, "frequency");
    if (!(power_min_kw > 0.0)) throw ConfigError("rated power must be positive");
    if (!(duty_min > 0.0) || duty_max >= 1.0) throw ConfigError("duty must lie in (0, 1)");
    if (!(freq_min_hz > 0.0)) throw ConfigError("frequency must be positive");
    if (!(deadband_c > 0.0)) throw ConfigError("deadband must be positive");
    if (!(ambient_c > set_point_c + deadband_c / 2.0)) {
        throw ConfigError("ambient must exceed the upper deadband edge");
    }
    if (!(eta > 0.0) || eta > 1.0) throw ConfigError("efficiency must lie in (0, 1]");
    if (consensus_weight < 0.0) throw ConfigError("consensus weight must be non-negative");
    if (consensus_step_s < 0.0) throw ConfigError("consensus step must be non-negative");
    if (!phase_schedule.empty()) {
        if (phase_schedule.front().start_s != 0.0) {
            throw ConfigError("phase schedule must start at t = 0");
        }
        for (std::size_t k = 1; k < phase_schedule.size(); ++k) {
            if (!(phase_schedule[k].start_s > phase_schedule[k - 1].start_s)) {
                oss << "phase schedule entries overlap at t = " << phase_schedule[k].start_s;
                throw ConfigError(oss.str());
            }
        }
        for (const auto& e : phase_schedule) {
            if (e.alpha_scale < 0.0) throw ConfigError("alpha scale must be non-negative");
        }
    }
}

std::uint64_t PopulationConfig::content_hash() const {
    std::ostringstream oss;
    oss.precision(17);
    oss << n << '|' << seed << '|' << power_min_kw << '|' << power_max_kw << '|' << duty_min
        << '|' << duty_max << '|' << freq_min_hz << '|' << freq_max_hz << '|' << deadband_c
        << '|' << set_point_c << '|' << ambient_c << '|' << eta << '|' << to_string(protocol)
        << '|' << consensus_weight << '|' << consensus_step_s << '|' << consensus_tol_hz << '|'
        << kuramoto_coupling << '|' << kuramoto_freq_correction;
    for (const auto& e : phase_schedule) {
        oss << '|' << e.start_s << ',' << to_string(e.regime) << ',' << e.alpha_scale;
    }
    return fnv1a64(oss.str());
}

double Population::total_rated_power_kw() const {
    double total = 0.0;
    for (const auto& u : units) total += u.params.energy_transfer_rate * u.params.efficiency;
    return total;
}

double Population::expected_mean_power_kw() const {
    double total = 0.0;
    for (const auto& u : units) {
        total += u.params.energy_transfer_rate * u.params.efficiency * u.duty;
    }
    return total;
}

double Population::mean_natural_freq_hz() const {
    double total = 0.0;
    for (const auto& u : units) total += u.natural_freq_hz;
    return total / static_cast<double>(units.size());
}

double Population::min_phase_time_s() const {
    double shortest = std::numeric_limits<double>::infinity();
    for (const auto& u : units) {
        const double period = 1.0 / u.natural_freq_hz;
        shortest = std::min({shortest, u.duty * period, (1.0 - u.duty) * period});
    }
    return shortest;
}

Population sample_population(const PopulationConfig& cfg) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, "population"));
    Population pop;
    pop.units.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        TclUnit unit;
        const double power = rng.uniform(cfg.power_min_kw, cfg.power_max_kw);
        unit.duty = rng.uniform(cfg.duty_min, cfg.duty_max);
        unit.natural_freq_hz = rng.uniform(cfg.freq_min_hz, cfg.freq_max_hz);
        unit.initial_phase_rad = rng.uniform(0.0, kTwoPi);
        unit.params = params_from_duty_frequency(unit.duty, unit.natural_freq_hz, cfg.deadband_c,
                                                 cfg.set_point_c, cfg.ambient_c, power, cfg.eta);
        unit.t_on_phase_rad = unit.duty * kTwoPi;
        unit.switch_bias = duty_bias(unit.t_on_phase_rad);
        unit.initial_temp_c = rng.uniform(unit.params.t_min(), unit.params.t_max());
        unit.initial_switch = rng.bernoulli(unit.duty) ? 1 : 0;
        pop.units.push_back(unit);
    }
    return pop;
}

double aggregate_power(std::span<const int> switches, std::span<const double> powers_kw,
                       std::span<const double> etas) {
    if (switches.size() != powers_kw.size() || switches.size() != etas.size()) {
        throw ShapeError("switch, power and efficiency vectors disagree in length");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < switches.size(); ++j) {
        total += powers_kw[j] * etas[j] * static_cast<double>(switches[j]);
    }
    return total;
}

std::vector<double> uniform_phase_offsets(std::size_t n) {
    if (n == 0) throw ConfigError("empty population");
    std::vector<double> offsets(n);
    const double spacing = kTwoPi / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) offsets[i] = static_cast<double>(i) * spacing;
    return offsets;
}

Series SimResult::tail_series(double fraction) const {
    if (!(fraction > 0.0) || fraction > 1.0) throw DomainError("tail fraction must lie in (0, 1]");
    const std::size_t n = p_agg_kw.size();
    const std::size_t keep = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                          static_cast<double>(n) * fraction));
    Series s;
    s.dt_s = dt_s;
    s.values.assign(p_agg_kw.end() - static_cast<std::ptrdiff_t>(keep), p_agg_kw.end());
    return s;
}

Series SimResult::window_series(double t0_s, double t1_s) const {
    if (!(t1_s > t0_s)) throw DomainError("window must have positive length");
    Series s;
    s.dt_s = dt_s;
    for (std::size_t k = 0; k < time_s.size(); ++k) {
        if (time_s[k] >= t0_s && time_s[k] < t1_s) s.values.push_back(p_agg_kw[k]);
    }
    if (s.values.empty()) throw DomainError("window contains no samples");
    return s;
}

EnsembleEngine::EnsembleEngine(const Population& pop, const PopulationConfig& cfg, double dt_s)
    : n_(pop.size()), protocol_(cfg.protocol), dt_s_(dt_s) {
    if (n_ == 0) throw ConfigError("empty population");
    if (!(dt_s > 0.0)) throw StepSizeError("simulation step must be positive");
    const double dt_limit = pop.min_phase_time_s() / 10.0;
    if (dt_s > dt_limit) {
        std::ostringstream oss;
        oss << "simulation step " << dt_s << " s exceeds " << dt_limit
            << " s (one tenth of the shortest cycle phase in the population)";
        throw StepSizeError(oss.str());
    }

    decay_.resize(n_);
    target_on_.resize(n_);
    target_off_.resize(n_);
    t_min_.resize(n_);
    t_max_.resize(n_);
    power_eta_kw_.resize(n_);
    bias_.resize(n_);
    natural_freq_hz_.resize(n_);
    initial_phase_rad_.resize(n_);
    kuramoto_omega_hz_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const TclUnit& u = pop.units[i];
        const double tau = u.params.time_constant_s();
        decay_[i] = std::exp(-dt_s / tau);
        target_on_[i] = u.params.on_equilibrium();
        target_off_[i] = u.params.ambient_temp;
        t_min_[i] = u.params.t_min();
        t_max_[i] = u.params.t_max();
        power_eta_kw_[i] = u.params.energy_transfer_rate * u.params.efficiency;
        bias_[i] = u.switch_bias;
        natural_freq_hz_[i] = u.natural_freq_hz;
        initial_phase_rad_[i] = u.initial_phase_rad;
        kuramoto_omega_hz_[i] = u.natural_freq_hz * cfg.kuramoto_freq_correction;
        power_cap_kw_ += power_eta_kw_[i];
        const double edge_rate =
            std::max(target_off_[i] - t_max_[i], t_min_[i] - target_on_[i]) / tau;
        comfort_bound_c_ = std::max(comfort_bound_c_, dt_s * edge_rate);
    }

    consensus_weight_ = cfg.consensus_weight;
    const double bound = stability_bound(n_, consensus_weight_);
    if (cfg.consensus_step_s > 0.0) {
        if (cfg.consensus_step_s >= bound) {
            std::ostringstream oss;
            oss << "consensus step " << cfg.consensus_step_s
                << " s violates the stability bound h < " << bound << " s";
            throw ConfigError(oss.str());
        }
        consensus_h_s_ = cfg.consensus_step_s;
    } else {
        consensus_h_s_ = std::isfinite(bound) ? 0.1 * bound : dt_s;
    }
    kuramoto_k_ = cfg.kuramoto_coupling;

    temps_.resize(n_);
    switches_.resize(n_);
    freqs_ = natural_freq_hz_;
    offsets_.assign(n_, 0.0);
    phases_ = initial_phase_rad_;
    for (std::size_t i = 0; i < n_; ++i) {
        temps_[i] = pop.units[i].initial_temp_c;
        switches_[i] = pop.units[i].initial_switch;
    }
    enter_random();
}

void EnsembleEngine::enter_random() {
    offsets_ = initial_phase_rad_;
    freqs_ = natural_freq_hz_;
    consensus_active_ = false;
    coupling_active_ = false;
}

void EnsembleEngine::enter_consensus() {
    offsets_.assign(n_, 0.0);
    consensus_active_ = true;
    coupling_active_ = true;
}

void EnsembleEngine::enter_desynchronized(double alpha_scale) {
    set_offset_spacing(alpha_scale * kTwoPi / static_cast<double>(n_));
    consensus_active_ = true;
    coupling_active_ = true;
}

void EnsembleEngine::set_offset_spacing(double spacing_rad) {
    if (spacing_rad < 0.0) throw DomainError("offset spacing must be non-negative");
    for (std::size_t i = 0; i < n_; ++i) offsets_[i] = static_cast<double>(i) * spacing_rad;
}

void EnsembleEngine::settle_frequencies_to_mean() {
    const double m = std::accumulate(freqs_.begin(), freqs_.end(), 0.0) /
                     static_cast<double>(n_);
    std::fill(freqs_.begin(), freqs_.end(), m);
}

EnsembleEngine::StepSample EnsembleEngine::step() {
    const double t = t_s_;
    double worst = 0.0;

#pragma omp parallel for schedule(static) reduction(max : worst) if (n_ >= 512)
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(n_); ++idx) {
        const auto i = static_cast<std::size_t>(idx);
        int s;
        switch (protocol_) {
        case Protocol::DistributedAveraging:
            s = heaviside(std::sin(kTwoPi * freqs_[i] * t + offsets_[i]) - bias_[i]);
            break;
        case Protocol::Kuramoto:
            s = heaviside(std::sin(phases_[i]) - bias_[i]);
            break;
        case Protocol::None:
        default:
            s = switches_[i];
            break;
        }
        // Safety clamp (and the whole rule for Protocol::None): outside the
        // deadband the thermostat's mandated state wins.
        if (temps_[i] < t_min_[i]) {
            s = 0;
        } else if (temps_[i] > t_max_[i]) {
            s = 1;
        }
        switches_[i] = s;
        const double target = s ? target_on_[i] : target_off_[i];
        temps_[i] = target + (temps_[i] - target) * decay_[i];
        const double over =
            std::max({temps_[i] - t_max_[i], t_min_[i] - temps_[i], 0.0});
        worst = std::max(worst, over);
    }
    max_overshoot_c_ = std::max(max_overshoot_c_, worst);

    StepSample sample;
    for (std::size_t i = 0; i < n_; ++i) {
        sample.p_agg_kw += power_eta_kw_[i] * static_cast<double>(switches_[i]);
    }
    sample.f_mean_hz =
        std::accumulate(freqs_.begin(), freqs_.end(), 0.0) / static_cast<double>(n_);

    if (protocol_ == Protocol::DistributedAveraging && consensus_active_ &&
        consensus_weight_ > 0.0 && n_ > 1) {
        const double sum = std::accumulate(freqs_.begin(), freqs_.end(), 0.0);
        const double count = static_cast<double>(n_);
        const double h = consensus_h_s_;
        const double w = consensus_weight_;
        for (double& fi : freqs_) fi += h * w * (sum - count * fi);
    }
    if (protocol_ == Protocol::Kuramoto) {
        phases_ = kuramoto_boolean_step(phases_, kuramoto_omega_hz_,
                                        coupling_active_ ? kuramoto_k_ : 0.0, offsets_, dt_s_);
    }

    t_s_ += dt_s_;
    return sample;
}

namespace {

std::vector<ScheduleEntry> resolve_schedule(const PopulationConfig& cfg, double duration_s) {
    if (cfg.protocol == Protocol::None) {
        return {{0.0, Regime::Random, 0.0}};
    }
    if (!cfg.phase_schedule.empty()) {
        if (cfg.phase_schedule.back().start_s >= duration_s) {
            throw ConfigError("phase schedule extends beyond the run duration");
        }
        return cfg.phase_schedule;
    }
    return {{0.0, Regime::Random, 0.0},
            {duration_s / 3.0, Regime::Consensus, 0.0},
            {2.0 * duration_s / 3.0, Regime::Desynchronized, 1.0}};
}

} // namespace

SimResult simulate(const PopulationConfig& cfg, double duration_s, double dt_s) {
    cfg.validate();
    if (!(duration_s > 0.0)) throw ConfigError("duration must be positive");
    const Population pop = sample_population(cfg);
    const std::vector<ScheduleEntry> schedule = resolve_schedule(cfg, duration_s);

    EnsembleEngine engine(pop, cfg, dt_s);
    const auto steps = static_cast<std::size_t>(duration_s / dt_s);

    SimResult result;
    result.dt_s = dt_s;
    result.power_cap_kw = engine.power_cap_kw();
    result.time_s.reserve(steps);
    result.p_agg_kw.reserve(steps);
    result.f_mean_hz.reserve(steps);
    if (cfg.record_switch_matrix) result.switch_matrix.reserve(steps);

    std::size_t next_entry = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt_s;
        while (next_entry < schedule.size() && t >= schedule[next_entry].start_s) {
            const ScheduleEntry& entry = schedule[next_entry];
            switch (entry.regime) {
            case Regime::Random: engine.enter_random(); break;
            case Regime::Consensus: engine.enter_consensus(); break;
            case Regime::Desynchronized: engine.enter_desynchronized(entry.alpha_scale); break;
            }
            result.regimes.push_back({entry.start_s, entry.regime});
            ++next_entry;
        }
        const auto sample = engine.step();
        result.time_s.push_back(t);
        result.p_agg_kw.push_back(sample.p_agg_kw);
        result.f_mean_hz.push_back(sample.f_mean_hz);
        if (cfg.record_switch_matrix) result.switch_matrix.push_back(engine.switches());
        if (sample.p_agg_kw < 0.0 || sample.p_agg_kw > result.power_cap_kw + 1e-9) {
            throw DomainError("aggregate power left [0, sum P eta]");
        }
    }
    result.max_comfort_overshoot_c = engine.max_comfort_overshoot_c();
    result.comfort_bound_c = engine.comfort_bound_c();
    return result;
}

} // namespace tclswarm
