#pragma once

#include <cstddef>
#include <vector>

namespace tclswarm {

/// Symmetric non-negative coupling weights with a zero diagonal.
///
/// The all-to-all case every experiment uses is stored in closed form
/// (count + uniform weight), which keeps one consensus step O(n) and avoids
/// materializing an n*n matrix for large populations. Arbitrary graphs can
/// still be supplied through from_dense().
class WeightMatrix {
public:
    /// All-to-all coupling: off-diagonal entries w, diagonal 0.
    static WeightMatrix all_to_all(std::size_t n, double w);

    /// General symmetric matrix; validates symmetry, zero diagonal and
    /// non-negativity.
    static WeightMatrix from_dense(std::vector<std::vector<double>> entries);

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] bool is_uniform() const { return dense_.empty(); }
    [[nodiscard]] double uniform_weight() const { return w_; }
    [[nodiscard]] double entry(std::size_t i, std::size_t j) const;

    /// Largest Laplacian eigenvalue (exact for the uniform case, Gershgorin
    /// upper bound for dense graphs); used for step-size checks.
    [[nodiscard]] double laplacian_spectral_bound() const;

private:
    WeightMatrix() = default;
    std::size_t n_ = 0;
    double w_ = 0.0;
    std::vector<std::vector<double>> dense_;
};

/// Builds the all-to-all weight matrix of Eq-style uniform coupling.
/// n == 0 raises ConfigError.
[[nodiscard]] WeightMatrix build_weight_matrix(std::size_t n, double w);

/// Largest explicit-Euler step that keeps the averaging update stable,
/// 2/(w*n) for all-to-all coupling. Returns +infinity when the population
/// has no coupled neighbor (n == 1 or w == 0).
[[nodiscard]] double stability_bound(std::size_t n, double w);

/// Per-node switching frequencies with the protocol's iteration clock.
struct FrequencyVector {
    std::vector<double> hz;
    double clock_s = 0.0;

    /// Entries must be strictly positive.
    void validate() const;
    [[nodiscard]] double mean() const;
    [[nodiscard]] double spread() const; ///< max - min
};

/// One simultaneous (Jacobi) averaging update,
///   f_i <- f_i + h * sum_j W_ij (f_j - f_i),
/// with every read taken from the pre-step vector. h must satisfy
/// h * lambda_max < 2 or ConfigError names the violated bound.
[[nodiscard]] FrequencyVector consensus_step(const FrequencyVector& f, const WeightMatrix& weights,
                                             double h_s);

/// In-place core of consensus_step for hot loops; identical arithmetic.
void consensus_step_in_place(std::vector<double>& f, const WeightMatrix& weights, double h_s);

struct ConsensusResult {
    std::vector<std::vector<double>> trajectory; ///< snapshots every `stride` steps
    bool converged = false;
    std::size_t steps = 0;
    double final_max_deviation_hz = 0.0; ///< max_i |f_i - mean(f0)| at exit
};

/// Iterates consensus_step until max_i |f_i - mean(f0)| <= tol or max_steps
/// is exhausted. Non-convergence is reported through the flag, not thrown.
[[nodiscard]] ConsensusResult run_consensus(const FrequencyVector& f0, const WeightMatrix& weights,
                                            double h_s, double tol_hz, std::size_t max_steps,
                                            std::size_t stride = 1);

} // namespace tclswarm
