#include "tclswarm/mlp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "tclswarm/errors.hpp"
#include "tclswarm/oscillator.hpp"
#include "tclswarm/rng.hpp"

namespace tclswarm {

std::pair<std::vector<double>, Scaler> minmax_normalize(const std::vector<double>& column,
                                                        const Scaler* reuse) {
    if (column.empty()) throw ShapeError("cannot normalize an empty column");
    Scaler scaler;
    if (reuse != nullptr) {
        scaler = *reuse;
    } else {
        auto [lo, hi] = std::minmax_element(column.begin(), column.end());
        scaler.min = *lo;
        scaler.max = *hi;
        if (!(scaler.max > scaler.min)) {
            throw DomainError("degenerate scaler: column is constant");
        }
    }
    std::vector<double> out(column.size());
    for (std::size_t k = 0; k < column.size(); ++k) out[k] = scaler.scale(column[k]);
    return {std::move(out), scaler};
}

double minmax_denormalize(const Scaler& scaler, double y) { return scaler.unscale(y); }

std::size_t MlpModel::parameter_count() const {
    std::size_t count = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        count += layer_sizes[l] * layer_sizes[l + 1] + layer_sizes[l + 1];
    }
    return count;
}

void MlpModel::validate() const {
    if (layer_sizes.size() < 2) throw TrainingError("model needs at least two layers");
    if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size()) {
        throw TrainingError("layer count does not match weight/bias count");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const std::size_t in = layer_sizes[l];
        const std::size_t out = layer_sizes[l + 1];
        if (weights[l].size() != in * out || biases[l].size() != out) {
            throw TrainingError("weight dimensions break the layer chain");
        }
        for (double w : weights[l]) {
            if (!std::isfinite(w)) throw TrainingError("non-finite weight");
        }
        for (double b : biases[l]) {
            if (!std::isfinite(b)) throw TrainingError("non-finite bias");
        }
    }
}

MlpModel init_mlp(std::uint64_t seed) {
    MlpModel model;
    Rng rng(derive_seed(seed, "mlp-init"));
    for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
        const std::size_t in = model.layer_sizes[l];
        const std::size_t out = model.layer_sizes[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        std::vector<double> w(in * out);
        for (double& v : w) v = rng.uniform(-bound, bound);
        model.weights.push_back(std::move(w));
        model.biases.emplace_back(out, 0.0);
    }
    model.validate();
    return model;
}

namespace {

/// Activations per layer for one input; returns all layer outputs
/// (activations[0] is the input itself).
std::vector<std::vector<double>> forward_trace(const MlpModel& model, double n_scaled,
                                               double p_norm_scaled) {
    std::vector<std::vector<double>> acts;
    acts.reserve(model.layer_sizes.size());
    acts.push_back({n_scaled, p_norm_scaled});
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        const std::size_t in = model.layer_sizes[l];
        const std::size_t out = model.layer_sizes[l + 1];
        std::vector<double> z(out);
        for (std::size_t o = 0; o < out; ++o) {
            double acc = model.biases[l][o];
            for (std::size_t i = 0; i < in; ++i) acc += model.weights[l][o * in + i] * acts[l][i];
            z[o] = acc;
        }
        const bool hidden = l + 1 < model.weights.size();
        if (hidden) {
            for (double& v : z) v = std::max(v, 0.0);
        }
        acts.push_back(std::move(z));
    }
    return acts;
}

MlpGradients zero_gradients(const MlpModel& model) {
    MlpGradients g;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        g.weights.emplace_back(model.weights[l].size(), 0.0);
        g.biases.emplace_back(model.biases[l].size(), 0.0);
    }
    return g;
}

double rmse_over(const MlpModel& model, const std::vector<ScaledRow>& rows) {
    double acc = 0.0;
    for (const auto& row : rows) {
        const double err = forward(model, row[0], row[1]) - row[2];
        acc += err * err;
    }
    return std::sqrt(acc / static_cast<double>(rows.size()));
}

} // namespace

double forward(const MlpModel& model, double n_scaled, double p_norm_scaled) {
    const auto acts = forward_trace(model, n_scaled, p_norm_scaled);
    const double y = acts.back()[0];
    if (!std::isfinite(y)) throw TrainingError("model produced a non-finite prediction");
    return y;
}

std::pair<double, MlpGradients> loss_and_gradients(const MlpModel& model,
                                                   const std::vector<ScaledRow>& batch) {
    if (batch.empty()) throw ShapeError("empty batch");
    MlpGradients grads = zero_gradients(model);
    const double inv_batch = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;

    for (const auto& row : batch) {
        const auto acts = forward_trace(model, row[0], row[1]);
        const double err = acts.back()[0] - row[2];
        loss += err * err * inv_batch;

        // delta for the output layer of the squared-error mean
        std::vector<double> delta{2.0 * err * inv_batch};
        for (std::size_t l = model.weights.size(); l-- > 0;) {
            const std::size_t in = model.layer_sizes[l];
            const std::size_t out = model.layer_sizes[l + 1];
            for (std::size_t o = 0; o < out; ++o) {
                grads.biases[l][o] += delta[o];
                for (std::size_t i = 0; i < in; ++i) {
                    grads.weights[l][o * in + i] += delta[o] * acts[l][i];
                }
            }
            if (l == 0) break;
            std::vector<double> prev(in, 0.0);
            for (std::size_t i = 0; i < in; ++i) {
                double acc = 0.0;
                for (std::size_t o = 0; o < out; ++o) {
                    acc += model.weights[l][o * in + i] * delta[o];
                }
                // rectifier gate of the producing hidden layer
                prev[i] = acts[l][i] > 0.0 ? acc : 0.0;
            }
            delta = std::move(prev);
        }
    }
    return {loss, std::move(grads)};
}

TrainReport train(MlpModel& model, const std::vector<ScaledRow>& rows, const TrainOptions& opts) {
    if (rows.empty()) throw ShapeError("empty training set");
    model.validate();
    if (opts.batch_size == 0) throw ConfigError("batch size must be positive");
    if (!(opts.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");

    std::vector<ScaledRow> shuffled = rows;
    Rng val_rng(derive_seed(opts.seed, "train-val-split"));
    val_rng.shuffle(shuffled);
    std::size_t val_count = static_cast<std::size_t>(
        static_cast<double>(shuffled.size()) * opts.val_fraction);
    if (shuffled.size() > 1 && val_count == 0) val_count = 1;
    if (val_count >= shuffled.size()) val_count = shuffled.size() - 1;
    std::vector<ScaledRow> fit_rows(shuffled.begin(),
                                    shuffled.end() - static_cast<std::ptrdiff_t>(val_count));
    std::vector<ScaledRow> val_rows(shuffled.end() - static_cast<std::ptrdiff_t>(val_count),
                                    shuffled.end());
    if (val_rows.empty()) val_rows = fit_rows; // single-example memorization case

    TrainReport report;
    Rng shuffle_rng(derive_seed(opts.seed, "train-shuffle"));
    MlpModel best = model;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;

    for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
        shuffle_rng.shuffle(fit_rows);
        for (std::size_t start = 0; start < fit_rows.size(); start += opts.batch_size) {
            const std::size_t stop = std::min(start + opts.batch_size, fit_rows.size());
            const std::vector<ScaledRow> batch(fit_rows.begin() + static_cast<std::ptrdiff_t>(start),
                                               fit_rows.begin() + static_cast<std::ptrdiff_t>(stop));
            auto [loss, grads] = loss_and_gradients(model, batch);
            if (!std::isfinite(loss)) {
                model = best;
                throw TrainingError("training diverged (non-finite loss); "
                                    "model restored to the last good checkpoint");
            }
            for (std::size_t l = 0; l < model.weights.size(); ++l) {
                for (std::size_t k = 0; k < model.weights[l].size(); ++k) {
                    model.weights[l][k] -= opts.learning_rate * grads.weights[l][k];
                }
                for (std::size_t k = 0; k < model.biases[l].size(); ++k) {
                    model.biases[l][k] -= opts.learning_rate * grads.biases[l][k];
                }
            }
        }
        try {
            model.validate();
        } catch (const TrainingError&) {
            model = best;
            throw TrainingError("training diverged (non-finite parameters); "
                                "model restored to the last good checkpoint");
        }
        report.train_rmse.push_back(rmse_over(model, fit_rows));
        report.val_rmse.push_back(rmse_over(model, val_rows));
        if (report.val_rmse.back() < best_val) {
            best_val = report.val_rmse.back();
            best = model;
            report.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best > opts.patience) {
            report.early_stopped = true;
            break;
        }
    }
    model = best;
    return report;
}

EvalMetrics evaluate(const MlpModel& model, const std::vector<LabeledExample>& test_rows) {
    if (test_rows.empty()) throw ShapeError("empty test set");
    EvalMetrics m;
    double sq_scaled = 0.0;
    double abs_rad = 0.0;
    double sq_rad = 0.0;
    for (const auto& row : test_rows) {
        const double y_hat =
            forward(model, model.n_scaler.scale(row.n), model.p_norm_scaler.scale(row.p_norm_pct));
        const double y = model.alpha_scaler.scale(row.alpha_rad);
        sq_scaled += (y_hat - y) * (y_hat - y);

        const double cap = kTwoPi / row.n;
        const double alpha_hat = std::clamp(model.alpha_scaler.unscale(y_hat), 0.0, cap);
        const double err_rad = alpha_hat - row.alpha_rad;
        abs_rad += std::abs(err_rad);
        sq_rad += err_rad * err_rad;
    }
    const double count = static_cast<double>(test_rows.size());
    m.rmse_scaled_pct = 100.0 * std::sqrt(sq_scaled / count);
    m.mse_scaled_pct = 100.0 * (sq_scaled / count);
    m.mae_rad = abs_rad / count;
    m.mae_deg = m.mae_rad * 180.0 / (kTwoPi / 2.0);
    m.rmse_rad = std::sqrt(sq_rad / count);
    return m;
}

double predict_alpha(const MlpModel& model, double n, double p_norm_pct) {
    if (!(n >= 1.0)) throw DomainError("population size must be at least 1");
    const double y =
        forward(model, model.n_scaler.scale(n), model.p_norm_scaler.scale(p_norm_pct));
    return std::clamp(model.alpha_scaler.unscale(y), 0.0, kTwoPi / n);
}

namespace {

void write_double(std::ostream& os, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    os.write(buf, ptr - buf);
}

} // namespace

void save_model(const MlpModel& model, const std::string& path) {
    model.validate();
    std::ofstream os(path);
    if (!os) throw IoError("cannot open model file for writing: " + path);
    os << "tclswarm-mlp v1\n";
    os << "layers";
    for (std::size_t s : model.layer_sizes) os << ' ' << s;
    os << "\nhidden " << model.hidden_activation;
    os << "\noutput " << model.output_activation << '\n';
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        os << 'W' << l + 1;
        for (double v : model.weights[l]) {
            os << ' ';
            write_double(os, v);
        }
        os << '\n' << 'b' << l + 1;
        for (double v : model.biases[l]) {
            os << ' ';
            write_double(os, v);
        }
        os << '\n';
    }
    auto scaler_line = [&](const char* name, const Scaler& s) {
        os << "scaler " << name << ' ';
        write_double(os, s.min);
        os << ' ';
        write_double(os, s.max);
        os << '\n';
    };
    scaler_line("n", model.n_scaler);
    scaler_line("p_norm", model.p_norm_scaler);
    scaler_line("alpha", model.alpha_scaler);
    if (!os) throw IoError("failed writing model file: " + path);
}

MlpModel load_model(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open model file: " + path);
    std::string line;
    if (!std::getline(is, line) || line != "tclswarm-mlp v1") {
        throw IoError("unrecognized model file header in " + path);
    }
    MlpModel model;
    model.layer_sizes.clear();

    auto expect_tag = [&](std::istringstream& ss, const std::string& tag) {
        std::string got;
        ss >> got;
        if (got != tag) throw IoError("model file: expected '" + tag + "', got '" + got + "'");
    };

    std::getline(is, line);
    {
        std::istringstream ss(line);
        expect_tag(ss, "layers");
        std::size_t s;
        while (ss >> s) model.layer_sizes.push_back(s);
    }
    std::getline(is, line);
    {
        std::istringstream ss(line);
        expect_tag(ss, "hidden");
        ss >> model.hidden_activation;
    }
    std::getline(is, line);
    {
        std::istringstream ss(line);
        expect_tag(ss, "output");
        ss >> model.output_activation;
    }
    for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
        const std::size_t in = model.layer_sizes[l];
        const std::size_t out = model.layer_sizes[l + 1];
        std::getline(is, line);
        std::istringstream ws(line);
        expect_tag(ws, "W" + std::to_string(l + 1));
        std::vector<double> w(in * out);
        for (double& v : w) {
            if (!(ws >> v)) throw IoError("model file: truncated weight row");
        }
        model.weights.push_back(std::move(w));
        std::getline(is, line);
        std::istringstream bs(line);
        expect_tag(bs, "b" + std::to_string(l + 1));
        std::vector<double> b(out);
        for (double& v : b) {
            if (!(bs >> v)) throw IoError("model file: truncated bias row");
        }
        model.biases.push_back(std::move(b));
    }
    auto read_scaler = [&](const char* name) {
        std::getline(is, line);
        std::istringstream ss(line);
        expect_tag(ss, "scaler");
        expect_tag(ss, name);
        Scaler s;
        if (!(ss >> s.min >> s.max)) throw IoError("model file: truncated scaler line");
        return s;
    };
    model.n_scaler = read_scaler("n");
    model.p_norm_scaler = read_scaler("p_norm");
    model.alpha_scaler = read_scaler("alpha");
    model.validate();
    return model;
}

} // namespace tclswarm
