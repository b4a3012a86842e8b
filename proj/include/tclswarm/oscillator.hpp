#pragma once

#include <cstddef>
#include <vector>

namespace tclswarm {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Unit step: 0 for negative arguments, 1 at zero and above.
[[nodiscard]] inline int heaviside(double x) { return x < 0.0 ? 0 : 1; }

/// Bias that maps an ON-time (expressed as phase in [0, 2pi]) onto the
/// sinusoid threshold: sin((pi - t_on_phase)/2). A half-period ON time
/// gives bias 0, a full-period ON time gives -1 (signal never drops out).
[[nodiscard]] double duty_bias(double t_on_phase);

/// Boolean switching signal Theta[sin(2 pi f t + alpha) - bias].
[[nodiscard]] int switching_signal(double frequency_hz, double t_s, double alpha_rad,
                                   double bias);

/// Phase-oscillator view of one load.
struct OscState {
    double phase_rad = 0.0;
    double natural_frequency_hz = 0.0;
    double phase_offset_rad = 0.0;
    double t_on_phase_rad = 0.0; ///< ON time mapped to phase, in [0, 2pi]
    double bias = 0.0;           ///< sin((pi - t_on_phase)/2)

    /// Phase reduced to [0, 2pi).
    [[nodiscard]] double phase() const;
};

/// Builds an OscState with the bias derived from the ON phase.
[[nodiscard]] OscState make_osc_state(double phase_rad, double natural_frequency_hz,
                                      double phase_offset_rad, double t_on_phase_rad);

/// Boolean coupling term sum_{j != i} |Theta[sin(phi_j)] - Theta[sin(phi_i + a_ij)]|
/// with the pairwise offset realized as a_ij = alpha_j - alpha_i.
[[nodiscard]] double boolean_coupling_sum(const std::vector<double>& phases_rad,
                                          const std::vector<double>& alphas_rad, std::size_t i);

/// Explicit-Euler update of every phase from the pre-step snapshot:
///   phi_i += dt * (2 pi omega_i + K * coupling_i).
/// Natural frequencies are in Hz; the phase advances in radians.
[[nodiscard]] std::vector<double> kuramoto_boolean_step(const std::vector<double>& phases_rad,
                                                        const std::vector<double>& omegas_hz,
                                                        double coupling_k,
                                                        const std::vector<double>& alphas_rad,
                                                        double dt_s);

/// Natural frequency backed out of a target common frequency at a given
/// phase snapshot: omega_i = omega_fft - K * coupling_i.
[[nodiscard]] double natural_frequency_correction(double omega_fft_hz, double coupling_k,
                                                  const std::vector<double>& phases_rad,
                                                  const std::vector<double>& alphas_rad,
                                                  std::size_t i);

} // namespace tclswarm
