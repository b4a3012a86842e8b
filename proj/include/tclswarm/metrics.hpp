#pragma once

#include <vector>

namespace tclswarm {

/// Uniformly sampled scalar series.
struct Series {
    double dt_s = 1.0;
    std::vector<double> values;

    void validate() const; ///< non-empty, dt > 0
    [[nodiscard]] double duration_s() const {
        return dt_s * static_cast<double>(values.size() - 1);
    }
};

[[nodiscard]] double mean(const Series& s);

/// Root mean square of the raw values.
[[nodiscard]] double rms(const Series& s);

/// RMS of the deviations from the series mean (the fluctuation level).
[[nodiscard]] double ripple_rms(const Series& s);

/// Largest relative excursion from the mean, max_t |x(t) - mean| / mean,
/// as a percentage. Requires a non-zero mean.
[[nodiscard]] double band_percent(const Series& s);

/// Normalized power reduction, (rms_baseline - rms_at_alpha)/rms_baseline * 100.
[[nodiscard]] double p_norm(double p_rms_agg_kw, double p_rms_alpha_kw);

/// Fluctuation reduction, (random - desynchronized)/random * 100.
[[nodiscard]] double p_red(double p_random_kw, double p_desynchronized_kw);

/// Root-mean-square error between two aligned series normalized by a base
/// power, sqrt((1/T) * integral (ref - agg)^2 dt / base^2) * 100, with the
/// integral taken by the trapezoid rule on the shared grid.
[[nodiscard]] double rmse_percent(const Series& reference, const Series& aggregate,
                                  double p_base_kw);

/// Frequency of the largest non-DC magnitude bin of the discrete Fourier
/// transform (rectangular window, zero-padded to the next power of two,
/// mean removed so the DC pedestal cannot leak over the fundamental).
/// The caller must supply a window covering at least two full periods;
/// featureless input raises ResolutionError.
[[nodiscard]] double dominant_frequency(const Series& s);

} // namespace tclswarm
