#include "tclswarm/dataset.hpp"

#include <numeric>
#include <string>

#include "tclswarm/delay.hpp"
#include "tclswarm/errors.hpp"
#include "tclswarm/rng.hpp"

namespace tclswarm {

PopulationConfig DatasetOptions::default_dataset_population() {
    PopulationConfig cfg;
    cfg.power_min_kw = 1.0;
    cfg.power_max_kw = 2.0;
    cfg.duty_min = 0.45;
    cfg.duty_max = 0.55;
    cfg.freq_min_hz = 0.0026;
    cfg.freq_max_hz = 0.0036;
    cfg.deadband_c = 2.0;
    cfg.set_point_c = 24.0;
    cfg.ambient_c = 32.0;
    cfg.protocol = Protocol::DistributedAveraging;
    return cfg;
}

Dataset generate_dataset(const DatasetOptions& opts) {
    if (opts.n_min < 1 || opts.n_min > opts.n_max) throw ConfigError("bad population size range");
    if (opts.n_stride == 0) throw ConfigError("size stride must be positive");
    if (opts.grid_size < 2) throw ConfigError("grid needs at least two points");

    std::vector<std::size_t> sizes;
    for (std::size_t n = opts.n_min; n <= opts.n_max; n += opts.n_stride) sizes.push_back(n);

    std::vector<std::vector<LabeledExample>> slots(sizes.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(sizes.size()); ++si) {
        const std::size_t n = sizes[static_cast<std::size_t>(si)];
        PopulationConfig cfg = opts.base;
        cfg.n = n;
        cfg.seed = derive_seed(opts.seed, "dataset:n=" + std::to_string(n));
        const DelayTable table = build_delay_table(cfg, opts.grid_size);
        std::vector<LabeledExample>& rows = slots[static_cast<std::size_t>(si)];
        rows.reserve(table.rows.size());
        for (const auto& row : table.rows) {
            rows.push_back({static_cast<double>(n), row.p_norm_pct, row.alpha_rad});
        }
    }

    Dataset ds;
    ds.seed = opts.seed;
    for (const auto& slot : slots) ds.rows.insert(ds.rows.end(), slot.begin(), slot.end());
    return ds;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double ratio, std::uint64_t seed) {
    if (ds.rows.empty()) throw ShapeError("cannot split an empty dataset");
    if (!(ratio > 0.0) || ratio >= 1.0) throw ConfigError("split ratio must lie in (0, 1)");
    std::vector<std::size_t> order(ds.rows.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, "dataset-split"));
    rng.shuffle(order);

    const auto train_count =
        static_cast<std::size_t>(ratio * static_cast<double>(ds.rows.size()));
    Dataset train{{}, ds.seed};
    Dataset test{{}, ds.seed};
    train.rows.reserve(train_count);
    test.rows.reserve(ds.rows.size() - train_count);
    for (std::size_t k = 0; k < order.size(); ++k) {
        (k < train_count ? train : test).rows.push_back(ds.rows[order[k]]);
    }
    return {std::move(train), std::move(test)};
}

void fit_scalers(MlpModel& model, const Dataset& ds) {
    std::vector<double> n_col, p_col, a_col;
    n_col.reserve(ds.rows.size());
    p_col.reserve(ds.rows.size());
    a_col.reserve(ds.rows.size());
    for (const auto& r : ds.rows) {
        n_col.push_back(r.n);
        p_col.push_back(r.p_norm_pct);
        a_col.push_back(r.alpha_rad);
    }
    model.n_scaler = minmax_normalize(n_col).second;
    model.p_norm_scaler = minmax_normalize(p_col).second;
    model.alpha_scaler = minmax_normalize(a_col).second;
}

std::vector<ScaledRow> scale_rows(const MlpModel& model, const Dataset& ds) {
    std::vector<ScaledRow> out;
    out.reserve(ds.rows.size());
    for (const auto& r : ds.rows) {
        out.push_back({model.n_scaler.scale(r.n), model.p_norm_scaler.scale(r.p_norm_pct),
                       model.alpha_scaler.scale(r.alpha_rad)});
    }
    return out;
}

} // namespace tclswarm
