#include "tclswarm/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tclswarm/errors.hpp"

namespace tclswarm {

void TclParams::validate() const {
    std::ostringstream oss;
    if (!(thermal_resistance > 0.0)) {
        oss << "thermal resistance must be positive, got " << thermal_resistance;
        throw DomainError(oss.str());
    }
    if (!(thermal_capacitance > 0.0)) {
        oss << "thermal capacitance must be positive, got " << thermal_capacitance;
        throw DomainError(oss.str());
    }
    if (!(energy_transfer_rate > 0.0)) {
        oss << "energy transfer rate must be positive, got " << energy_transfer_rate;
        throw DomainError(oss.str());
    }
    if (!(deadband > 0.0)) {
        oss << "deadband must be positive, got " << deadband;
        throw DomainError(oss.str());
    }
    if (!(efficiency > 0.0) || efficiency > 1.0) {
        oss << "efficiency must lie in (0, 1], got " << efficiency;
        throw DomainError(oss.str());
    }
    if (!(ambient_temp > t_max())) {
        oss << "ambient " << ambient_temp << " degC must exceed t_max " << t_max()
            << " degC or the OFF phase never reaches the upper bound";
        throw DomainError(oss.str());
    }
    if (!(on_equilibrium() < t_min())) {
        oss << "ON equilibrium " << on_equilibrium() << " degC must lie below t_min "
            << t_min() << " degC or the ON phase never reaches the lower bound";
        throw DomainError(oss.str());
    }
}

std::pair<double, double> derived_bounds(const TclParams& params) {
    params.validate();
    return {params.t_min(), params.t_max()};
}

int thermostat(double temperature, int prev_switch, const TclParams& params) {
    if (temperature < params.t_min()) return 0;
    if (temperature > params.t_max()) return 1;
    return prev_switch;
}

CycleTimes cycle_times(const TclParams& params) {
    params.validate();
    const double tau = params.time_constant_s();
    const double ta = params.ambient_temp;
    const double pr = params.energy_transfer_rate * params.thermal_resistance;
    CycleTimes ct;
    ct.t_off_s = tau * std::log((ta - params.t_min()) / (ta - params.t_max()));
    ct.t_on_s = tau * std::log((params.t_max() - ta + pr) / (params.t_min() - ta + pr));
    return ct;
}

DutyFrequency duty_and_frequency(const TclParams& params) {
    const CycleTimes ct = cycle_times(params);
    return {ct.t_on_s / ct.period_s(), 1.0 / ct.period_s()};
}

TclThermalState step_temperature(const TclThermalState& state, const TclParams& params,
                                 double dt_s) {
    const CycleTimes ct = cycle_times(params);
    const double dt_limit = std::min(ct.t_on_s, ct.t_off_s) / 10.0;
    if (!(dt_s > 0.0) || dt_s > dt_limit) {
        std::ostringstream oss;
        oss << "step " << dt_s << " s outside (0, " << dt_limit
            << "] s (one tenth of the shorter cycle phase)";
        throw StepSizeError(oss.str());
    }
    const double target = state.switch_state ? params.on_equilibrium() : params.ambient_temp;
    TclThermalState next = state;
    next.temperature = target + (state.temperature - target) *
                                    std::exp(-dt_s / params.time_constant_s());
    next.switch_state = thermostat(next.temperature, state.switch_state, params);
    next.clock_s = state.clock_s + dt_s;
    return next;
}

TclParams params_from_duty_frequency(double duty, double frequency_hz, double deadband,
                                     double set_point, double ambient, double power_kw,
                                     double efficiency) {
    if (!(duty > 0.0) || duty >= 1.0) throw DomainError("duty must lie in (0, 1)");
    if (!(frequency_hz > 0.0)) throw DomainError("frequency must be positive");
    if (!(deadband > 0.0)) throw DomainError("deadband must be positive");
    if (!(power_kw > 0.0)) throw DomainError("rated power must be positive");
    const double t_min = set_point - deadband / 2.0;
    const double t_max = set_point + deadband / 2.0;
    if (!(ambient > t_max)) throw DomainError("ambient must exceed the upper deadband edge");

    const double t_on = duty / frequency_hz;
    const double t_off = (1.0 - duty) / frequency_hz;
    // OFF phase pins the time constant, ON phase then pins R.
    const double tau_s = t_off / std::log((ambient - t_min) / (ambient - t_max));
    const double growth = std::exp(t_on / tau_s);
    const double resistance =
        (growth * (t_min - ambient) - (t_max - ambient)) / (power_kw * (1.0 - growth));
    if (!(resistance > 0.0) || !std::isfinite(resistance)) {
        throw DomainError("no feasible thermal resistance for the requested duty/frequency");
    }

    TclParams params;
    params.thermal_resistance = resistance;
    params.thermal_capacitance = tau_s / 3600.0 / resistance;
    params.energy_transfer_rate = power_kw;
    params.ambient_temp = ambient;
    params.set_point = set_point;
    params.deadband = deadband;
    params.efficiency = efficiency;
    params.validate();
    return params;
}

} // namespace tclswarm
