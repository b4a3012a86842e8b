#include "tclswarm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include "tclswarm/errors.hpp"
#include "tclswarm/oscillator.hpp"

namespace tclswarm {

void Series::validate() const {
    if (values.empty()) throw ShapeError("series must be non-empty");
    if (!(dt_s > 0.0)) throw ShapeError("series step must be positive");
}

double mean(const Series& s) {
    s.validate();
    return std::accumulate(s.values.begin(), s.values.end(), 0.0) /
           static_cast<double>(s.values.size());
}

double rms(const Series& s) {
    s.validate();
    double accum = 0.0;
    for (double v : s.values) accum += v * v;
    return std::sqrt(accum / static_cast<double>(s.values.size()));
}

double ripple_rms(const Series& s) {
    const double m = mean(s);
    double accum = 0.0;
    for (double v : s.values) accum += (v - m) * (v - m);
    return std::sqrt(accum / static_cast<double>(s.values.size()));
}

double band_percent(const Series& s) {
    const double m = mean(s);
    if (m == 0.0) throw DomainError("band is undefined for a zero-mean series");
    double worst = 0.0;
    for (double v : s.values) worst = std::max(worst, std::abs(v - m));
    return worst / std::abs(m) * 100.0;
}

double p_norm(double p_rms_agg_kw, double p_rms_alpha_kw) {
    if (!(p_rms_agg_kw > 0.0)) throw DomainError("baseline RMS power must be positive");
    return (p_rms_agg_kw - p_rms_alpha_kw) / p_rms_agg_kw * 100.0;
}

double p_red(double p_random_kw, double p_desynchronized_kw) {
    if (!(p_random_kw > 0.0)) throw DomainError("random-regime power must be positive");
    return (p_random_kw - p_desynchronized_kw) / p_random_kw * 100.0;
}

double rmse_percent(const Series& reference, const Series& aggregate, double p_base_kw) {
    reference.validate();
    aggregate.validate();
    if (reference.values.size() != aggregate.values.size() || reference.dt_s != aggregate.dt_s) {
        throw ShapeError("reference and aggregate series must share one grid");
    }
    if (!(p_base_kw > 0.0)) throw DomainError("base power must be positive");
    const std::size_t n = reference.values.size();
    if (n == 1) {
        const double d = reference.values[0] - aggregate.values[0];
        return std::abs(d) / p_base_kw * 100.0;
    }
    double integral = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = reference.values[k] - aggregate.values[k];
        const double sq = d * d;
        if (k > 0) integral += 0.5 * (prev + sq) * reference.dt_s;
        prev = sq;
    }
    const double duration = reference.duration_s();
    return std::sqrt(integral / duration / (p_base_kw * p_base_kw)) * 100.0;
}

namespace {

/// Iterative in-place radix-2 transform; n must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -kTwoPi / static_cast<double>(len);
        const std::complex<double> root(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= root;
            }
        }
    }
}

} // namespace

double dominant_frequency(const Series& s) {
    s.validate();
    const std::size_t n = s.values.size();
    if (n < 4) throw ResolutionError("window too short for spectral estimation");

    const double offset = mean(s);
    std::size_t n_fft = 1;
    while (n_fft < n) n_fft <<= 1;

    std::vector<std::complex<double>> buf(n_fft, std::complex<double>(0.0, 0.0));
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        buf[k] = std::complex<double>(s.values[k] - offset, 0.0);
        scale = std::max(scale, std::abs(s.values[k] - offset));
    }
    fft_radix2(buf);

    std::size_t peak = 0;
    double peak_mag = 0.0;
    for (std::size_t k = 1; k <= n_fft / 2; ++k) {
        const double mag = std::abs(buf[k]);
        if (mag > peak_mag) {
            peak_mag = mag;
            peak = k;
        }
    }
    const double floor = static_cast<double>(n) * std::max(scale, 1.0) * 1e-12;
    if (peak == 0 || peak_mag <= floor) {
        throw ResolutionError("no non-DC spectral peak (constant or featureless input)");
    }
    return static_cast<double>(peak) / (static_cast<double>(n_fft) * s.dt_s);
}

} // namespace tclswarm
