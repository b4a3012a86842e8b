#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace tclswarm {

/// Min-max column bounds used to map features onto [0, 1] and back.
struct Scaler {
    double min = 0.0;
    double max = 1.0;

    [[nodiscard]] double scale(double x) const { return (x - min) / (max - min); }
    [[nodiscard]] double unscale(double y) const { return y * (max - min) + min; }
};

/// Fits a scaler on a column, or reuses the provided one. Fitting a
/// constant column raises DomainError (degenerate scaler).
std::pair<std::vector<double>, Scaler> minmax_normalize(const std::vector<double>& column,
                                                        const Scaler* reuse = nullptr);

[[nodiscard]] double minmax_denormalize(const Scaler& scaler, double y);

/// Small dense regressor, layers 2 -> 2 -> 4 -> 1, rectifier hidden units,
/// identity output. Inputs are the scaled population size and the scaled
/// reduction target; the output is the scaled offset.
struct MlpModel {
    std::vector<std::size_t> layer_sizes{2, 2, 4, 1};
    std::vector<std::vector<double>> weights; ///< per layer, row-major (out x in)
    std::vector<std::vector<double>> biases;  ///< per layer
    std::string hidden_activation = "relu";
    std::string output_activation = "identity";
    Scaler n_scaler;
    Scaler p_norm_scaler;
    Scaler alpha_scaler;

    [[nodiscard]] std::size_t parameter_count() const;
    void validate() const; ///< dimension chain and finiteness
};

/// Seeded initialization: weights uniform in +-1/sqrt(fan_in), zero biases.
[[nodiscard]] MlpModel init_mlp(std::uint64_t seed);

/// Forward pass on scaled inputs; raises TrainingError on non-finite output.
[[nodiscard]] double forward(const MlpModel& model, double n_scaled, double p_norm_scaled);

/// One scaled training example: {n, p_norm, alpha}, all in [0, 1].
using ScaledRow = std::array<double, 3>;

struct MlpGradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

/// Mean-squared-error loss over a batch and its exact gradients
/// (backpropagation). Exposed so tests can compare against finite
/// differences.
std::pair<double, MlpGradients> loss_and_gradients(const MlpModel& model,
                                                   const std::vector<ScaledRow>& batch);

struct TrainOptions {
    std::size_t epochs = 100;
    std::size_t batch_size = 256;
    double learning_rate = 0.01;
    std::size_t patience = 10;    ///< early-stop patience on validation RMSE
    double val_fraction = 0.1;    ///< tail of the shuffled training rows
    std::uint64_t seed = 1;
};

struct TrainReport {
    std::vector<double> train_rmse; ///< per epoch, scaled domain
    std::vector<double> val_rmse;   ///< per epoch, scaled domain
    std::size_t best_epoch = 0;
    bool early_stopped = false;
};

/// Mini-batch gradient descent on the scaled rows. The model is left at the
/// best validation checkpoint. Divergence restores the checkpoint and
/// raises TrainingError.
TrainReport train(MlpModel& model, const std::vector<ScaledRow>& rows, const TrainOptions& opts);

struct EvalMetrics {
    double rmse_scaled_pct = 0.0; ///< 100 * RMSE in the scaled domain
    double mse_scaled_pct = 0.0;  ///< 100 * MSE in the scaled domain
    double mae_deg = 0.0;         ///< mean |alpha_hat - alpha| in degrees
    double mae_rad = 0.0;
    double rmse_rad = 0.0;
};

/// One raw example: population size, reduction target (percent), offset (rad).
struct LabeledExample {
    double n = 0.0;
    double p_norm_pct = 0.0;
    double alpha_rad = 0.0;
};

/// Scores the model on raw rows using its stored scalers. Predictions are
/// clamped to the physical range [0, 2pi/n] before the angular errors.
[[nodiscard]] EvalMetrics evaluate(const MlpModel& model,
                                   const std::vector<LabeledExample>& test_rows);

/// End-user prediction path: scale, forward, unscale, clamp to [0, 2pi/n].
[[nodiscard]] double predict_alpha(const MlpModel& model, double n, double p_norm_pct);

/// Versioned plain-text persistence.
void save_model(const MlpModel& model, const std::string& path);
[[nodiscard]] MlpModel load_model(const std::string& path);

} // namespace tclswarm
