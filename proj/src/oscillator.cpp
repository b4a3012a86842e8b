#include "tclswarm/oscillator.hpp"

#include <cmath>
#include <sstream>

#include "tclswarm/errors.hpp"

namespace tclswarm {

double duty_bias(double t_on_phase) {
    if (!(t_on_phase >= 0.0) || t_on_phase > kTwoPi) {
        std::ostringstream oss;
        oss << "ON phase " << t_on_phase << " rad outside [0, 2pi]";
        throw DomainError(oss.str());
    }
    return std::sin((kTwoPi / 2.0 - t_on_phase) / 2.0);
}

int switching_signal(double frequency_hz, double t_s, double alpha_rad, double bias) {
    return heaviside(std::sin(kTwoPi * frequency_hz * t_s + alpha_rad) - bias);
}

double OscState::phase() const {
    double p = std::fmod(phase_rad, kTwoPi);
    if (p < 0.0) p += kTwoPi;
    return p;
}

OscState make_osc_state(double phase_rad, double natural_frequency_hz, double phase_offset_rad,
                        double t_on_phase_rad) {
    OscState s;
    s.phase_rad = phase_rad;
    s.natural_frequency_hz = natural_frequency_hz;
    s.phase_offset_rad = phase_offset_rad;
    s.t_on_phase_rad = t_on_phase_rad;
    s.bias = duty_bias(t_on_phase_rad);
    return s;
}

double boolean_coupling_sum(const std::vector<double>& phases_rad,
                            const std::vector<double>& alphas_rad, std::size_t i) {
    if (phases_rad.size() != alphas_rad.size()) {
        throw ShapeError("phase and offset vectors disagree in length");
    }
    if (i >= phases_rad.size()) throw ShapeError("oscillator index out of range");
    double sum = 0.0;
    for (std::size_t j = 0; j < phases_rad.size(); ++j) {
        if (j == i) continue;
        const double pair_offset = alphas_rad[j] - alphas_rad[i];
        sum += std::abs(heaviside(std::sin(phases_rad[j])) -
                        heaviside(std::sin(phases_rad[i] + pair_offset)));
    }
    return sum;
}

std::vector<double> kuramoto_boolean_step(const std::vector<double>& phases_rad,
                                          const std::vector<double>& omegas_hz,
                                          double coupling_k,
                                          const std::vector<double>& alphas_rad, double dt_s) {
    const std::size_t n = phases_rad.size();
    if (omegas_hz.size() != n || alphas_rad.size() != n) {
        throw ShapeError("phase, frequency and offset vectors disagree in length");
    }
    if (!(dt_s > 0.0)) throw DomainError("step must be positive");
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double coupling =
            coupling_k == 0.0 ? 0.0 : coupling_k * boolean_coupling_sum(phases_rad, alphas_rad, i);
        next[i] = phases_rad[i] + dt_s * (kTwoPi * omegas_hz[i] + coupling);
    }
    return next;
}

double natural_frequency_correction(double omega_fft_hz, double coupling_k,
                                    const std::vector<double>& phases_rad,
                                    const std::vector<double>& alphas_rad, std::size_t i) {
    return omega_fft_hz - coupling_k * boolean_coupling_sum(phases_rad, alphas_rad, i);
}

} // namespace tclswarm
