#include "tclswarm/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tclswarm/errors.hpp"

namespace tclswarm {

WeightMatrix WeightMatrix::all_to_all(std::size_t n, double w) {
    if (n == 0) throw ConfigError("empty population: weight matrix needs at least one node");
    if (w < 0.0) throw ConfigError("edge weight must be non-negative");
    WeightMatrix m;
    m.n_ = n;
    m.w_ = w;
    return m;
}

WeightMatrix WeightMatrix::from_dense(std::vector<std::vector<double>> entries) {
    const std::size_t n = entries.size();
    if (n == 0) throw ConfigError("empty population: weight matrix needs at least one node");
    for (std::size_t i = 0; i < n; ++i) {
        if (entries[i].size() != n) throw ShapeError("weight matrix must be square");
        if (entries[i][i] != 0.0) throw ConfigError("weight matrix diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j) {
            if (entries[i][j] < 0.0) throw ConfigError("weights must be non-negative");
            if (entries[i][j] != entries[j][i]) throw ConfigError("weights must be symmetric");
        }
    }
    WeightMatrix m;
    m.n_ = n;
    m.dense_ = std::move(entries);
    return m;
}

double WeightMatrix::entry(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw ShapeError("weight index out of range");
    if (!dense_.empty()) return dense_[i][j];
    return i == j ? 0.0 : w_;
}

double WeightMatrix::laplacian_spectral_bound() const {
    if (is_uniform()) {
        if (n_ <= 1) return 0.0;
        return w_ * static_cast<double>(n_);
    }
    // Gershgorin: lambda_max <= 2 * max_i degree_i.
    double max_degree = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double deg = std::accumulate(dense_[i].begin(), dense_[i].end(), 0.0);
        max_degree = std::max(max_degree, deg);
    }
    return 2.0 * max_degree;
}

WeightMatrix build_weight_matrix(std::size_t n, double w) {
    return WeightMatrix::all_to_all(n, w);
}

double stability_bound(std::size_t n, double w) {
    if (n == 0) throw ConfigError("empty population");
    if (n == 1 || w == 0.0) return std::numeric_limits<double>::infinity();
    if (w < 0.0) throw ConfigError("edge weight must be non-negative");
    return 2.0 / (w * static_cast<double>(n));
}

void FrequencyVector::validate() const {
    if (hz.empty()) throw ShapeError("frequency vector must be non-empty");
    for (double f : hz) {
        if (!(f > 0.0)) throw DomainError("frequencies must be strictly positive");
    }
}

double FrequencyVector::mean() const {
    return std::accumulate(hz.begin(), hz.end(), 0.0) / static_cast<double>(hz.size());
}

double FrequencyVector::spread() const {
    auto [lo, hi] = std::minmax_element(hz.begin(), hz.end());
    return *hi - *lo;
}

namespace {

void check_step(const WeightMatrix& weights, double h_s) {
    if (!(h_s > 0.0)) throw ConfigError("consensus step must be positive");
    const double lambda = weights.laplacian_spectral_bound();
    if (lambda > 0.0 && h_s * lambda >= 2.0) {
        std::ostringstream oss;
        oss << "consensus step " << h_s << " s violates the Euler stability bound h < "
            << 2.0 / lambda << " s (h * w * n < 2)";
        throw ConfigError(oss.str());
    }
}

} // namespace

void consensus_step_in_place(std::vector<double>& f, const WeightMatrix& weights, double h_s) {
    const std::size_t n = f.size();
    if (n != weights.size()) throw ShapeError("frequency vector and weight matrix disagree");
    if (weights.is_uniform()) {
        const double w = weights.uniform_weight();
        const double sum = std::accumulate(f.begin(), f.end(), 0.0);
        const double count = static_cast<double>(n);
        for (double& fi : f) fi += h_s * w * (sum - count * fi);
        return;
    }
    const std::vector<double> prev = f;
    for (std::size_t i = 0; i < n; ++i) {
        double accum = 0.0;
        for (std::size_t j = 0; j < n; ++j) accum += weights.entry(i, j) * (prev[j] - prev[i]);
        f[i] = prev[i] + h_s * accum;
    }
}

FrequencyVector consensus_step(const FrequencyVector& f, const WeightMatrix& weights, double h_s) {
    f.validate();
    check_step(weights, h_s);
    FrequencyVector next = f;
    consensus_step_in_place(next.hz, weights, h_s);
    next.clock_s = f.clock_s + h_s;
    return next;
}

ConsensusResult run_consensus(const FrequencyVector& f0, const WeightMatrix& weights, double h_s,
                              double tol_hz, std::size_t max_steps, std::size_t stride) {
    f0.validate();
    check_step(weights, h_s);
    if (stride == 0) stride = 1;
    const double target = f0.mean();

    ConsensusResult result;
    std::vector<double> f = f0.hz;
    auto max_deviation = [&] {
        double dev = 0.0;
        for (double fi : f) dev = std::max(dev, std::abs(fi - target));
        return dev;
    };

    result.trajectory.push_back(f);
    result.final_max_deviation_hz = max_deviation();
    for (std::size_t k = 0; k < max_steps; ++k) {
        if (result.final_max_deviation_hz <= tol_hz) {
            result.converged = true;
            return result;
        }
        consensus_step_in_place(f, weights, h_s);
        ++result.steps;
        if (result.steps % stride == 0) result.trajectory.push_back(f);
        result.final_max_deviation_hz = max_deviation();
    }
    result.converged = result.final_max_deviation_hz <= tol_hz;
    return result;
}

} // namespace tclswarm
