#include "tclswarm/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tclswarm/errors.hpp"

namespace tclswarm {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open for reading: " + path);
    return is;
}

double parse_double(const std::string& field, const std::string& path, std::size_t line_no) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        std::ostringstream oss;
        oss << path << ':' << line_no << ": malformed number '" << field << "'";
        throw IoError(oss.str());
    }
    return v;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

void expect_header(const std::string& got, const std::string& want, const std::string& path) {
    if (got != want) {
        throw IoError(path + ":1: expected header '" + want + "', got '" + got + "'");
    }
}

} // namespace

void write_time_series_csv(const SimResult& result, const std::string& path,
                           bool include_frequency) {
    auto os = open_out(path);
    os << (include_frequency ? "t_s,p_agg_kw,f_mean_hz" : "t_s,p_agg_kw") << '\n';
    for (std::size_t k = 0; k < result.time_s.size(); ++k) {
        os << format_double(result.time_s[k]) << ',' << format_double(result.p_agg_kw[k]);
        if (include_frequency) os << ',' << format_double(result.f_mean_hz[k]);
        os << '\n';
    }
    if (!os) throw IoError("failed writing " + path);
}

TimeSeriesCsv read_time_series_csv(const std::string& path) {
    auto is = open_in(path);
    std::string line;
    if (!std::getline(is, line)) throw IoError(path + ": empty file");
    bool with_freq = false;
    if (line == "t_s,p_agg_kw,f_mean_hz") {
        with_freq = true;
    } else {
        expect_header(line, "t_s,p_agg_kw", path);
    }
    TimeSeriesCsv out;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != (with_freq ? 3u : 2u)) {
            std::ostringstream oss;
            oss << path << ':' << line_no << ": expected " << (with_freq ? 3 : 2) << " fields";
            throw IoError(oss.str());
        }
        out.t_s.push_back(parse_double(fields[0], path, line_no));
        out.p_agg_kw.push_back(parse_double(fields[1], path, line_no));
        if (with_freq) out.f_mean_hz.push_back(parse_double(fields[2], path, line_no));
    }
    if (out.t_s.size() >= 2) out.dt_s = out.t_s[1] - out.t_s[0];
    return out;
}

void write_delay_table_csv(const DelayTable& table, const std::string& path) {
    auto os = open_out(path);
    os << "n,alpha_rad,p_norm_pct\n";
    for (const auto& row : table.rows) {
        os << table.n << ',' << format_double(row.alpha_rad) << ','
           << format_double(row.p_norm_pct) << '\n';
    }
    if (!os) throw IoError("failed writing " + path);
}

DelayTable read_delay_table_csv(const std::string& path) {
    auto is = open_in(path);
    std::string line;
    if (!std::getline(is, line)) throw IoError(path + ": empty file");
    expect_header(line, "n,alpha_rad,p_norm_pct", path);
    DelayTable table;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 3) {
            std::ostringstream oss;
            oss << path << ':' << line_no << ": expected 3 fields";
            throw IoError(oss.str());
        }
        table.n = static_cast<std::size_t>(parse_double(fields[0], path, line_no));
        table.rows.push_back({parse_double(fields[1], path, line_no),
                              parse_double(fields[2], path, line_no)});
    }
    table.validate();
    return table;
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
    auto os = open_out(path);
    os << "n,p_norm_pct,alpha_rad\n";
    for (const auto& row : ds.rows) {
        os << format_double(row.n) << ',' << format_double(row.p_norm_pct) << ','
           << format_double(row.alpha_rad) << '\n';
    }
    if (!os) throw IoError("failed writing " + path);
}

Dataset read_dataset_csv(const std::string& path) {
    auto is = open_in(path);
    std::string line;
    if (!std::getline(is, line)) throw IoError(path + ": empty file");
    expect_header(line, "n,p_norm_pct,alpha_rad", path);
    Dataset ds;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 3) {
            std::ostringstream oss;
            oss << path << ':' << line_no << ": expected 3 fields";
            throw IoError(oss.str());
        }
        ds.rows.push_back({parse_double(fields[0], path, line_no),
                           parse_double(fields[1], path, line_no),
                           parse_double(fields[2], path, line_no)});
    }
    return ds;
}

void write_reference_schedule_csv(const ReferenceSchedule& schedule, const std::string& path) {
    auto os = open_out(path);
    os << "start_s,target_p_norm_pct\n";
    for (const auto& seg : schedule.segments) {
        os << format_double(seg.start_s) << ',' << format_double(seg.target_p_norm_pct) << '\n';
    }
    if (!os) throw IoError("failed writing " + path);
}

ReferenceSchedule read_reference_schedule_csv(const std::string& path) {
    auto is = open_in(path);
    std::string line;
    if (!std::getline(is, line)) throw IoError(path + ": empty file");
    expect_header(line, "start_s,target_p_norm_pct", path);
    ReferenceSchedule schedule;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 2) {
            std::ostringstream oss;
            oss << path << ':' << line_no << ": expected 2 fields";
            throw IoError(oss.str());
        }
        schedule.segments.push_back({parse_double(fields[0], path, line_no),
                                     parse_double(fields[1], path, line_no)});
    }
    return schedule;
}

} // namespace tclswarm
