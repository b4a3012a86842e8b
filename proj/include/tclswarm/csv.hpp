#pragma once

#include <string>
#include <vector>

#include "tclswarm/dataset.hpp"
#include "tclswarm/delay.hpp"
#include "tclswarm/ensemble.hpp"

namespace tclswarm {

/// Shortest exact decimal representation of a double (round-trips through
/// the readers below losslessly).
[[nodiscard]] std::string format_double(double v);

/// Time-series schema: header `t_s,p_agg_kw[,f_mean_hz]`.
void write_time_series_csv(const SimResult& result, const std::string& path,
                           bool include_frequency);
struct TimeSeriesCsv {
    double dt_s = 0.0;
    std::vector<double> t_s;
    std::vector<double> p_agg_kw;
    std::vector<double> f_mean_hz; ///< empty when the column is absent
};
[[nodiscard]] TimeSeriesCsv read_time_series_csv(const std::string& path);

/// Delay-table schema: header `n,alpha_rad,p_norm_pct`.
void write_delay_table_csv(const DelayTable& table, const std::string& path);
[[nodiscard]] DelayTable read_delay_table_csv(const std::string& path);

/// Dataset schema: header `n,p_norm_pct,alpha_rad`.
void write_dataset_csv(const Dataset& ds, const std::string& path);
[[nodiscard]] Dataset read_dataset_csv(const std::string& path);

/// Reference-schedule schema: header `start_s,target_p_norm_pct`.
void write_reference_schedule_csv(const ReferenceSchedule& schedule, const std::string& path);
[[nodiscard]] ReferenceSchedule read_reference_schedule_csv(const std::string& path);

} // namespace tclswarm
