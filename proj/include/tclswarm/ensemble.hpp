#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tclswarm/metrics.hpp"
#include "tclswarm/thermal.hpp"

namespace tclswarm {

enum class Protocol { DistributedAveraging, Kuramoto, None };

enum class Regime { Random, Consensus, Desynchronized };

[[nodiscard]] std::string to_string(Protocol p);
[[nodiscard]] std::string to_string(Regime r);

/// One segment of the run schedule. alpha_scale multiplies the uniform
/// offset spacing 2pi/n and only matters for the desynchronized regime.
struct ScheduleEntry {
    double start_s = 0.0;
    Regime regime = Regime::Random;
    double alpha_scale = 1.0;
};

/// Heterogeneity ranges and protocol selection for one population.
struct PopulationConfig {
    std::size_t n = 1;
    std::uint64_t seed = 1;
    double power_min_kw = 1.66;
    double power_max_kw = 1.66;
    double duty_min = 0.422;
    double duty_max = 0.482;
    double freq_min_hz = 0.0029;
    double freq_max_hz = 0.0033;
    double deadband_c = 3.0;
    double set_point_c = 27.0;
    double ambient_c = 32.0;
    double eta = 1.0;
    Protocol protocol = Protocol::DistributedAveraging;
    std::vector<ScheduleEntry> phase_schedule; ///< empty selects thirds of the run

    double consensus_weight = 0.06;
    double consensus_step_s = 0.0; ///< 0 selects 0.1 * stability bound
    double consensus_tol_hz = 1e-6;

    double kuramoto_coupling = 0.267;
    double kuramoto_freq_correction = 1.0; ///< manual gain on natural frequencies

    bool record_switch_matrix = false;

    void validate() const;
    /// Stable content hash of every field above (provenance key).
    [[nodiscard]] std::uint64_t content_hash() const;
};

/// Static per-load data produced by sampling.
struct TclUnit {
    TclParams params;
    double duty = 0.5;
    double natural_freq_hz = 0.0;
    double initial_phase_rad = 0.0;
    double t_on_phase_rad = 0.0;
    double switch_bias = 0.0;
    double initial_temp_c = 0.0;
    int initial_switch = 0;
};

struct Population {
    std::vector<TclUnit> units;

    [[nodiscard]] std::size_t size() const { return units.size(); }
    [[nodiscard]] double total_rated_power_kw() const;
    [[nodiscard]] double expected_mean_power_kw() const; ///< sum P_j eta_j d_j
    [[nodiscard]] double mean_natural_freq_hz() const;
    [[nodiscard]] double mean_period_s() const { return 1.0 / mean_natural_freq_hz(); }
    [[nodiscard]] double min_phase_time_s() const; ///< shortest t_on/t_off across loads
};

/// Draws n loads with rated power, duty and frequency uniform over the
/// configured ranges, initial phases uniform on [0, 2pi), temperatures
/// uniform inside the deadband and switch states Bernoulli(duty), all from
/// the config seed. Thermal R and C per load are fitted so the natural
/// cycle reproduces the drawn duty and frequency.
[[nodiscard]] Population sample_population(const PopulationConfig& cfg);

/// Instantaneous aggregate power, sum_j P_j eta_j s_j.
[[nodiscard]] double aggregate_power(std::span<const int> switches,
                                     std::span<const double> powers_kw,
                                     std::span<const double> etas);

/// Evenly spaced offsets alpha_i = i * 2pi/n.
[[nodiscard]] std::vector<double> uniform_phase_offsets(std::size_t n);

struct RegimeBoundary {
    double start_s = 0.0;
    Regime regime = Regime::Random;
};

struct SimResult {
    double dt_s = 1.0;
    std::vector<double> time_s;
    std::vector<double> p_agg_kw;
    std::vector<double> f_mean_hz;
    std::vector<std::vector<int>> switch_matrix; ///< per step, when recorded
    std::vector<RegimeBoundary> regimes;
    double power_cap_kw = 0.0;            ///< sum P_j eta_j
    double max_comfort_overshoot_c = 0.0; ///< worst excursion beyond the deadband
    double comfort_bound_c = 0.0;         ///< single-step overshoot bound

    [[nodiscard]] Series power_series() const { return {dt_s, p_agg_kw}; }
    /// Final fraction of the power trace (steady-state window).
    [[nodiscard]] Series tail_series(double fraction) const;
    /// Power trace restricted to [t0, t1).
    [[nodiscard]] Series window_series(double t0_s, double t1_s) const;
};

/// Runs the full system: thermal dynamics plus protocol-driven switching
/// through the scheduled regimes. Random evolves each load at its own
/// frequency and random phase; consensus averages the frequencies while the
/// offsets collapse to zero; desynchronized applies the uniform offsets
/// scaled by the schedule's alpha_scale. The thermostat always acts as a
/// safety clamp: outside the deadband its mandated state wins for the step.
[[nodiscard]] SimResult simulate(const PopulationConfig& cfg, double duration_s, double dt_s);

/// Step-level simulation core shared by simulate(), the delay-table sweep
/// and the load-following controller.
class EnsembleEngine {
public:
    EnsembleEngine(const Population& pop, const PopulationConfig& cfg, double dt_s);

    void enter_random();
    void enter_consensus();
    void enter_desynchronized(double alpha_scale);
    /// Re-spaces offsets to alpha_i = i * spacing without touching anything else.
    void set_offset_spacing(double spacing_rad);
    /// Replaces every frequency with the population mean (the consensus limit).
    void settle_frequencies_to_mean();

    struct StepSample {
        double p_agg_kw = 0.0;
        double f_mean_hz = 0.0;
    };
    StepSample step();

    [[nodiscard]] double t_s() const { return t_s_; }
    [[nodiscard]] double dt_s() const { return dt_s_; }
    [[nodiscard]] const std::vector<int>& switches() const { return switches_; }
    [[nodiscard]] const std::vector<double>& frequencies_hz() const { return freqs_; }
    [[nodiscard]] const std::vector<double>& temperatures_c() const { return temps_; }
    [[nodiscard]] const std::vector<double>& offsets_rad() const { return offsets_; }
    [[nodiscard]] double power_cap_kw() const { return power_cap_kw_; }
    [[nodiscard]] double max_comfort_overshoot_c() const { return max_overshoot_c_; }
    [[nodiscard]] double comfort_bound_c() const { return comfort_bound_c_; }

private:
    // population constants
    std::size_t n_ = 0;
    Protocol protocol_ = Protocol::DistributedAveraging;
    double dt_s_ = 1.0;
    std::vector<double> decay_;      ///< exp(-dt/tau) per load
    std::vector<double> target_on_;  ///< Ta - P R
    std::vector<double> target_off_; ///< Ta
    std::vector<double> t_min_, t_max_;
    std::vector<double> power_eta_kw_;
    std::vector<double> bias_;
    std::vector<double> natural_freq_hz_;
    std::vector<double> initial_phase_rad_;
    std::vector<double> kuramoto_omega_hz_;
    double power_cap_kw_ = 0.0;
    double comfort_bound_c_ = 0.0;
    double consensus_h_s_ = 0.0;
    double consensus_weight_ = 0.0;
    double kuramoto_k_ = 0.0;

    // evolving state
    double t_s_ = 0.0;
    std::vector<double> temps_;
    std::vector<int> switches_;
    std::vector<double> freqs_;
    std::vector<double> offsets_;
    std::vector<double> phases_; ///< Kuramoto protocol only
    bool consensus_active_ = false;
    bool coupling_active_ = false;
    double max_overshoot_c_ = 0.0;
};

} // namespace tclswarm
