#pragma once

#include <utility>

namespace tclswarm {

/// Physical constants of one thermostatically controlled load (a cooling
/// unit: the ON state pumps heat out, the OFF state drifts toward ambient).
///
/// The thermal capacitance is in kWh/degC, so R*C is a time constant in
/// hours; time_constant_s() converts it to seconds, the time unit used
/// everywhere else.
struct TclParams {
    double thermal_resistance = 2.0;    ///< R, degC/kW
    double thermal_capacitance = 10.0;  ///< C, kWh/degC
    double energy_transfer_rate = 14.0; ///< P, kW
    double ambient_temp = 32.0;         ///< Ta, degC
    double set_point = 20.0;            ///< Ts, degC
    double deadband = 1.0;              ///< delta, degC
    double efficiency = 1.0;            ///< eta, dimensionless

    [[nodiscard]] double t_min() const { return set_point - deadband / 2.0; }
    [[nodiscard]] double t_max() const { return set_point + deadband / 2.0; }
    [[nodiscard]] double time_constant_s() const {
        return thermal_resistance * thermal_capacitance * 3600.0;
    }
    /// Equilibrium temperature with the compressor held ON.
    [[nodiscard]] double on_equilibrium() const {
        return ambient_temp - energy_transfer_rate * thermal_resistance;
    }

    /// Throws DomainError unless positivity and cooling-feasibility hold:
    /// Ta > Ts + delta/2 (OFF phase can reach t_max) and
    /// Ta - P*R < Ts - delta/2 (ON phase can reach t_min).
    void validate() const;
};

/// Instantaneous condition of one load.
struct TclThermalState {
    double temperature = 20.0; ///< degC
    int switch_state = 0;      ///< 0 = OFF, 1 = ON
    double clock_s = 0.0;      ///< elapsed simulation time
};

/// (t_min, t_max) = (Ts - delta/2, Ts + delta/2).
[[nodiscard]] std::pair<double, double> derived_bounds(const TclParams& params);

/// Hysteresis switching rule: 0 below t_min, 1 above t_max, otherwise the
/// previous state is held. Boundary equalities hold the previous state.
[[nodiscard]] int thermostat(double temperature, int prev_switch, const TclParams& params);

/// ON/OFF phase durations of the natural limit cycle, in seconds.
struct CycleTimes {
    double t_on_s = 0.0;
    double t_off_s = 0.0;
    [[nodiscard]] double period_s() const { return t_on_s + t_off_s; }
};

/// Closed-form phase durations from the exponential solution:
///   t_off = RC ln[(Ta - t_min)/(Ta - t_max)]
///   t_on  = RC ln[(t_max - Ta + PR)/(t_min - Ta + PR)]
/// Throws DomainError when feasibility fails (log of a non-positive ratio).
[[nodiscard]] CycleTimes cycle_times(const TclParams& params);

struct DutyFrequency {
    double duty = 0.0;
    double frequency_hz = 0.0;
};

/// d = t_on/(t_on + t_off), f = 1/(t_on + t_off).
[[nodiscard]] DutyFrequency duty_and_frequency(const TclParams& params);

/// Advances the temperature by the exact exponential solution of the linear
/// ODE over dt with the switch held fixed, then applies the thermostat and
/// advances the clock.
///
/// dt must not exceed one tenth of the shorter cycle phase; larger steps
/// throw StepSizeError (the switching decision is only evaluated at step
/// boundaries, so coarse steps smear the limit cycle).
[[nodiscard]] TclThermalState step_temperature(const TclThermalState& state,
                                               const TclParams& params, double dt_s);

/// Inverse fit: constructs R and C so that the natural limit cycle of the
/// returned parameter set reproduces the requested duty and frequency at
/// the given deadband, set point, ambient and rated power. This is how
/// field observations (f, d) are turned into a consistent thermal model.
/// Throws DomainError when no feasible R > 0 exists.
[[nodiscard]] TclParams params_from_duty_frequency(double duty, double frequency_hz,
                                                   double deadband, double set_point,
                                                   double ambient, double power_kw,
                                                   double efficiency = 1.0);

} // namespace tclswarm
