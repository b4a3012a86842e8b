#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "tclswarm/config.hpp"
#include "tclswarm/csv.hpp"
#include "tclswarm/dataset.hpp"
#include "tclswarm/delay.hpp"
#include "tclswarm/ensemble.hpp"
#include "tclswarm/errors.hpp"
#include "tclswarm/manifest.hpp"
#include "tclswarm/metrics.hpp"
#include "tclswarm/mlp.hpp"
#include "tclswarm/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitRefuseOverwrite = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::int64_t seed = -1; ///< -1 keeps the config seed
    int threads = 0;
    bool force = false;
};

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads <= 0) {
        if (const char* env = std::getenv("TCLSWARM_THREADS")) {
            threads = std::atoi(env);
        }
    }
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

class RefuseOverwrite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void guard_or_refuse(const std::string& path, bool force) {
    if (!force && std::filesystem::exists(path)) {
        throw RefuseOverwrite("output exists, pass --force to overwrite: " + path);
    }
}

tclswarm::FullConfig load_config(const CommonArgs& args) {
    tclswarm::FullConfig cfg = tclswarm::parse_config_file(args.config_path);
    if (args.seed >= 0) {
        cfg.population.seed = static_cast<std::uint64_t>(args.seed);
        cfg.dataset.seed = cfg.population.seed;
    }
    return cfg;
}

void finish_manifest(tclswarm::RunManifest& manifest, const std::string& out_path,
                     std::chrono::steady_clock::time_point started) {
    manifest.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    manifest.write(out_path + ".manifest.json");
}

int cmd_simulate(const CommonArgs& args) {
    const auto started = std::chrono::steady_clock::now();
    guard_or_refuse(args.out_path, args.force);
    tclswarm::FullConfig cfg = load_config(args);
    const tclswarm::SimResult result =
        tclswarm::simulate(cfg.population, cfg.run.duration_s, cfg.run.dt_s);
    const bool with_freq =
        cfg.population.protocol == tclswarm::Protocol::DistributedAveraging;
    tclswarm::write_time_series_csv(result, args.out_path, with_freq);

    tclswarm::RunManifest manifest;
    manifest.subcommand = "simulate";
    manifest.config_snapshot = cfg.snapshot();
    manifest.master_seed = cfg.population.seed;
    manifest.add_output(args.out_path);
    finish_manifest(manifest, args.out_path, started);

    const tclswarm::Series tail = result.tail_series(0.2);
    std::cout << "steps=" << result.p_agg_kw.size()
              << " steady_mean_kw=" << tclswarm::format_double(tclswarm::mean(tail))
              << " steady_rms_kw=" << tclswarm::format_double(tclswarm::rms(tail))
              << " band_pct=" << tclswarm::format_double(tclswarm::band_percent(tail)) << '\n';
    return kExitOk;
}

int cmd_sweep(const CommonArgs& args, std::size_t grid_override) {
    const auto started = std::chrono::steady_clock::now();
    guard_or_refuse(args.out_path, args.force);
    tclswarm::FullConfig cfg = load_config(args);
    const std::size_t grid = grid_override > 0 ? grid_override : cfg.sweep.grid_size;
    const tclswarm::DelayTable table = tclswarm::build_delay_table(cfg.population, grid);
    tclswarm::write_delay_table_csv(table, args.out_path);

    tclswarm::RunManifest manifest;
    manifest.subcommand = "sweep";
    manifest.config_snapshot = cfg.snapshot();
    manifest.config_snapshot.emplace_back("sweep.resolved_grid_size", std::to_string(grid));
    manifest.master_seed = cfg.population.seed;
    manifest.add_output(args.out_path);
    finish_manifest(manifest, args.out_path, started);

    std::cout << "rows=" << table.rows.size()
              << " max_p_norm_pct=" << tclswarm::format_double(table.max_p_norm()) << '\n';
    return kExitOk;
}

int cmd_load_follow(const CommonArgs& args, const std::string& schedule_path,
                    const std::string& table_path, const std::string& cache_dir) {
    const auto started = std::chrono::steady_clock::now();
    guard_or_refuse(args.out_path, args.force);
    tclswarm::FullConfig cfg = load_config(args);
    const tclswarm::ReferenceSchedule schedule =
        tclswarm::read_reference_schedule_csv(schedule_path);
    schedule.validate();

    tclswarm::DelayTable table;
    if (!table_path.empty()) {
        table = tclswarm::read_delay_table_csv(table_path);
    } else {
        std::ostringstream key;
        key << std::hex << cfg.population.content_hash() << '-' << std::dec
            << cfg.sweep.grid_size;
        const std::filesystem::path cached =
            std::filesystem::path(cache_dir) / ("delay_table_" + key.str() + ".csv");
        if (std::filesystem::exists(cached)) {
            table = tclswarm::read_delay_table_csv(cached.string());
        } else {
            table = tclswarm::build_delay_table(cfg.population, cfg.sweep.grid_size);
            std::filesystem::create_directories(cache_dir);
            tclswarm::write_delay_table_csv(table, cached.string());
        }
    }

    const tclswarm::Population pop = tclswarm::sample_population(cfg.population);
    const double dt = cfg.run.dt_s > 0.0 ? cfg.run.dt_s : tclswarm::default_step_s(pop);
    const tclswarm::LoadFollowResult result =
        tclswarm::load_follow(cfg.population, table, schedule, cfg.run.duration_s, dt);
    for (const auto& seg : result.segments) {
        if (seg.clamped) {
            std::cerr << "warning: segment at t=" << seg.start_s << " s target "
                      << seg.target_p_norm_pct << "% is outside the achievable range; "
                      << "clamped to alpha=" << seg.alpha_rad << " rad\n";
        }
    }
    tclswarm::write_time_series_csv(result.sim, args.out_path, false);

    tclswarm::RunManifest manifest;
    manifest.subcommand = "load-follow";
    manifest.config_snapshot = cfg.snapshot();
    manifest.master_seed = cfg.population.seed;
    manifest.add_output(args.out_path);
    finish_manifest(manifest, args.out_path, started);

    std::cout << "segments=" << result.segments.size() << " steps=" << result.sim.p_agg_kw.size()
              << '\n';
    return kExitOk;
}

int cmd_dataset(const CommonArgs& args) {
    const auto started = std::chrono::steady_clock::now();
    guard_or_refuse(args.out_path, args.force);
    tclswarm::DatasetOptions opts;
    tclswarm::FullConfig cfg;
    if (!args.config_path.empty()) {
        cfg = load_config(args);
        opts = cfg.dataset;
    } else if (args.seed >= 0) {
        opts.seed = static_cast<std::uint64_t>(args.seed);
    }
    const tclswarm::Dataset ds = tclswarm::generate_dataset(opts);
    tclswarm::write_dataset_csv(ds, args.out_path);

    tclswarm::RunManifest manifest;
    manifest.subcommand = "dataset";
    manifest.config_snapshot = cfg.snapshot();
    manifest.master_seed = opts.seed;
    manifest.add_output(args.out_path);
    finish_manifest(manifest, args.out_path, started);

    std::cout << "rows=" << ds.rows.size() << '\n';
    return kExitOk;
}

int cmd_train(const CommonArgs& args, const std::string& in_path) {
    const auto started = std::chrono::steady_clock::now();
    guard_or_refuse(args.out_path, args.force);
    tclswarm::TrainSettings settings;
    tclswarm::FullConfig cfg;
    std::uint64_t seed = 1;
    if (!args.config_path.empty()) {
        cfg = load_config(args);
        settings = cfg.train;
        seed = cfg.population.seed;
    }
    if (args.seed >= 0) seed = static_cast<std::uint64_t>(args.seed);

    const tclswarm::Dataset ds = tclswarm::read_dataset_csv(in_path);
    tclswarm::MlpModel model = tclswarm::init_mlp(seed);
    tclswarm::fit_scalers(model, ds);
    const auto [train_set, test_set] = tclswarm::split_dataset(ds, settings.split_ratio, seed);

    tclswarm::TrainOptions topts;
    topts.epochs = settings.epochs;
    topts.batch_size = settings.batch_size;
    topts.learning_rate = settings.learning_rate;
    topts.patience = settings.patience;
    topts.val_fraction = settings.val_fraction;
    topts.seed = seed;
    const tclswarm::TrainReport report =
        tclswarm::train(model, tclswarm::scale_rows(model, train_set), topts);
    const tclswarm::EvalMetrics metrics = tclswarm::evaluate(model, test_set.rows);
    tclswarm::save_model(model, args.out_path);

    tclswarm::RunManifest manifest;
    manifest.subcommand = "train";
    manifest.config_snapshot = cfg.snapshot();
    manifest.master_seed = seed;
    manifest.add_output(args.out_path);
    finish_manifest(manifest, args.out_path, started);

    std::cout << "train_rows=" << train_set.rows.size() << " test_rows=" << test_set.rows.size()
              << '\n'
              << "epochs_run=" << report.train_rmse.size() << " best_epoch=" << report.best_epoch
              << (report.early_stopped ? " (early stop)" : "") << '\n'
              << "test_rmse_scaled_pct=" << tclswarm::format_double(metrics.rmse_scaled_pct)
              << '\n'
              << "test_mse_scaled_pct=" << tclswarm::format_double(metrics.mse_scaled_pct) << '\n'
              << "test_mae_deg=" << tclswarm::format_double(metrics.mae_deg) << '\n'
              << "test_mae_rad=" << tclswarm::format_double(metrics.mae_rad) << '\n'
              << "test_rmse_rad=" << tclswarm::format_double(metrics.rmse_rad) << '\n';
    return kExitOk;
}

int cmd_predict(const std::string& model_path, double n, double p_norm_pct) {
    const tclswarm::MlpModel model = tclswarm::load_model(model_path);
    const double alpha = tclswarm::predict_alpha(model, n, p_norm_pct);
    std::cout << "alpha_rad=" << tclswarm::format_double(alpha)
              << " alpha_deg=" << tclswarm::format_double(alpha * 180.0 / 3.14159265358979323846)
              << '\n';
    return kExitOk;
}

int cmd_metrics(const std::string& in_path, double p_base_kw, double tail_fraction) {
    const tclswarm::TimeSeriesCsv csv = tclswarm::read_time_series_csv(in_path);
    if (csv.t_s.size() < 2) throw tclswarm::ShapeError("series needs at least two samples");
    tclswarm::Series full{csv.dt_s, csv.p_agg_kw};
    const auto keep = static_cast<std::size_t>(
        static_cast<double>(full.values.size()) * tail_fraction);
    tclswarm::Series tail{csv.dt_s,
                          std::vector<double>(full.values.end() - static_cast<std::ptrdiff_t>(
                                                                      std::max<std::size_t>(keep, 1)),
                                              full.values.end())};
    const double steady_mean = tclswarm::mean(tail);
    double base = p_base_kw;
    std::string base_source = "flag";
    if (base <= 0.0) {
        base = *std::max_element(full.values.begin(), full.values.end());
        base_source = "max observed sample (pass --pbase for the rated total)";
    }
    tclswarm::Series reference{tail.dt_s, std::vector<double>(tail.values.size(), steady_mean)};

    std::cout << "samples=" << full.values.size() << '\n'
              << "mean_kw=" << tclswarm::format_double(tclswarm::mean(full)) << '\n'
              << "steady_mean_kw=" << tclswarm::format_double(steady_mean) << '\n'
              << "steady_rms_kw=" << tclswarm::format_double(tclswarm::rms(tail)) << '\n'
              << "steady_ripple_rms_kw=" << tclswarm::format_double(tclswarm::ripple_rms(tail))
              << '\n'
              << "steady_band_pct=" << tclswarm::format_double(tclswarm::band_percent(tail))
              << '\n'
              << "rmse_pct=" << tclswarm::format_double(tclswarm::rmse_percent(reference, tail, base))
              << " (base " << tclswarm::format_double(base) << " kW from " << base_source << ")\n";
    try {
        std::cout << "dominant_freq_hz="
                  << tclswarm::format_double(tclswarm::dominant_frequency(full)) << '\n';
    } catch (const tclswarm::ResolutionError&) {
        std::cout << "dominant_freq_hz=n/a (featureless window)\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desynchronization toolkit for thermostatically controlled load populations"};
    app.require_subcommand(1);

    CommonArgs args;
    int threads = 0;
    app.add_option("--threads", threads,
                   "Worker thread cap (falls back to TCLSWARM_THREADS, then hardware)");

    auto add_common = [&](CLI::App* sub, bool needs_config, bool needs_out) {
        auto* c = sub->add_option("--config", args.config_path, "Config file path");
        if (needs_config) c->required();
        auto* o = sub->add_option("--out", args.out_path, "Output file path");
        if (needs_out) o->required();
        sub->add_option("--seed", args.seed, "Master seed override");
        sub->add_flag("--force", args.force, "Overwrite existing outputs");
    };

    auto* simulate = app.add_subcommand("simulate", "Run one population through its schedule");
    add_common(simulate, true, true);

    auto* sweep = app.add_subcommand("sweep", "Build a delay table over offsets in [0, 2pi/N]");
    add_common(sweep, true, true);
    std::size_t grid_override = 0;
    sweep->add_option("--grid", grid_override, "Grid size override");

    auto* follow = app.add_subcommand("load-follow", "Track a reference reduction schedule");
    add_common(follow, true, true);
    std::string schedule_path, table_path, cache_dir = ".tclswarm-cache";
    follow->add_option("--schedule", schedule_path, "Reference schedule CSV")->required();
    follow->add_option("--table", table_path, "Delay table CSV (default: cached sweep)");
    follow->add_option("--cache-dir", cache_dir, "Delay table cache directory");

    auto* dataset = app.add_subcommand("dataset", "Generate regression data from delay sweeps");
    add_common(dataset, false, true);

    auto* train = app.add_subcommand("train", "Fit the offset regressor on a dataset");
    add_common(train, false, true);
    std::string in_path;
    train->add_option("--in", in_path, "Dataset CSV")->required();

    auto* predict = app.add_subcommand("predict", "Predict the offset for a target reduction");
    std::string model_path;
    double pred_n = 0.0, pred_pnorm = 0.0;
    predict->add_option("--model", model_path, "Model file")->required();
    predict->add_option("--n", pred_n, "Population size")->required();
    predict->add_option("--pnorm", pred_pnorm, "Target reduction, percent")->required();

    auto* metrics = app.add_subcommand("metrics", "Score a time-series CSV");
    std::string metrics_in;
    double p_base = 0.0, tail_fraction = 0.2;
    metrics->add_option("--in", metrics_in, "Time-series CSV")->required();
    metrics->add_option("--pbase", p_base, "Base power for the error score, kW");
    metrics->add_option("--tail", tail_fraction, "Steady-state window fraction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    apply_threads(threads);
    try {
        if (simulate->parsed()) return cmd_simulate(args);
        if (sweep->parsed()) return cmd_sweep(args, grid_override);
        if (follow->parsed()) return cmd_load_follow(args, schedule_path, table_path, cache_dir);
        if (dataset->parsed()) return cmd_dataset(args);
        if (train->parsed()) return cmd_train(args, in_path);
        if (predict->parsed()) return cmd_predict(model_path, pred_n, pred_pnorm);
        if (metrics->parsed()) return cmd_metrics(metrics_in, p_base, tail_fraction);
    } catch (const RefuseOverwrite& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRefuseOverwrite;
    } catch (const tclswarm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitConfig;
}
