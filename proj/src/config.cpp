#include "tclswarm/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tclswarm/csv.hpp"
#include "tclswarm/errors.hpp"

namespace tclswarm {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

struct ParseCursor {
    const std::string& name;
    std::size_t line_no = 0;

    [[noreturn]] void fail(const std::string& message) const {
        std::ostringstream oss;
        oss << name << ':' << line_no << ": " << message;
        throw ConfigError(oss.str());
    }

    double number(const std::string& value) const {
        double v = 0.0;
        const char* first = value.data();
        const char* last = value.data() + value.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) fail("malformed number '" + value + "'");
        return v;
    }

    std::size_t count(const std::string& value) const {
        const double v = number(value);
        if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
            fail("expected a non-negative integer, got '" + value + "'");
        }
        return static_cast<std::size_t>(v);
    }

    std::uint64_t seed(const std::string& value) const {
        std::uint64_t v = 0;
        const char* first = value.data();
        const char* last = value.data() + value.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) fail("malformed seed '" + value + "'");
        return v;
    }

    bool boolean(const std::string& value) const {
        if (value == "true" || value == "1") return true;
        if (value == "false" || value == "0") return false;
        fail("expected true/false, got '" + value + "'");
    }

    Protocol protocol(const std::string& value) const {
        if (value == "distributed-averaging") return Protocol::DistributedAveraging;
        if (value == "kuramoto") return Protocol::Kuramoto;
        if (value == "none") return Protocol::None;
        fail("unknown protocol '" + value +
             "' (expected distributed-averaging, kuramoto or none)");
    }
};

} // namespace

void FullConfig::resolve_schedule() {
    if (consensus_start_s < 0.0 && desync_start_s < 0.0 && alpha_scale < 0.0) return;
    const double duration = run.duration_s;
    const double t_consensus = consensus_start_s >= 0.0 ? consensus_start_s : duration / 3.0;
    const double t_desync = desync_start_s >= 0.0 ? desync_start_s : 2.0 * duration / 3.0;
    const double scale = alpha_scale >= 0.0 ? alpha_scale : 1.0;
    population.phase_schedule = {{0.0, Regime::Random, 0.0},
                                 {t_consensus, Regime::Consensus, 0.0},
                                 {t_desync, Regime::Desynchronized, scale}};
}

std::vector<std::pair<std::string, std::string>> FullConfig::snapshot() const {
    std::vector<std::pair<std::string, std::string>> kv;
    auto num = [](double v) { return format_double(v); };
    kv.emplace_back("population.count", std::to_string(population.n));
    kv.emplace_back("population.seed", std::to_string(population.seed));
    kv.emplace_back("population.power_min_kw", num(population.power_min_kw));
    kv.emplace_back("population.power_max_kw", num(population.power_max_kw));
    kv.emplace_back("population.duty_min", num(population.duty_min));
    kv.emplace_back("population.duty_max", num(population.duty_max));
    kv.emplace_back("population.freq_min_hz", num(population.freq_min_hz));
    kv.emplace_back("population.freq_max_hz", num(population.freq_max_hz));
    kv.emplace_back("population.deadband_c", num(population.deadband_c));
    kv.emplace_back("population.set_point_c", num(population.set_point_c));
    kv.emplace_back("population.ambient_c", num(population.ambient_c));
    kv.emplace_back("population.eta", num(population.eta));
    kv.emplace_back("population.protocol", to_string(population.protocol));
    kv.emplace_back("consensus.weight", num(population.consensus_weight));
    kv.emplace_back("consensus.step_s", num(population.consensus_step_s));
    kv.emplace_back("consensus.tol_hz", num(population.consensus_tol_hz));
    kv.emplace_back("kuramoto.coupling", num(population.kuramoto_coupling));
    kv.emplace_back("kuramoto.frequency_correction", num(population.kuramoto_freq_correction));
    for (const auto& e : population.phase_schedule) {
        kv.emplace_back("schedule." + to_string(e.regime),
                        num(e.start_s) + "@" + num(e.alpha_scale));
    }
    kv.emplace_back("run.duration_s", num(run.duration_s));
    kv.emplace_back("run.dt_s", num(run.dt_s));
    kv.emplace_back("sweep.grid_size", std::to_string(sweep.grid_size));
    kv.emplace_back("dataset.n_min", std::to_string(dataset.n_min));
    kv.emplace_back("dataset.n_max", std::to_string(dataset.n_max));
    kv.emplace_back("dataset.n_stride", std::to_string(dataset.n_stride));
    kv.emplace_back("dataset.grid_size", std::to_string(dataset.grid_size));
    kv.emplace_back("train.epochs", std::to_string(train.epochs));
    kv.emplace_back("train.batch_size", std::to_string(train.batch_size));
    kv.emplace_back("train.learning_rate", num(train.learning_rate));
    kv.emplace_back("train.patience", std::to_string(train.patience));
    kv.emplace_back("train.val_fraction", num(train.val_fraction));
    kv.emplace_back("train.split_ratio", num(train.split_ratio));
    return kv;
}

FullConfig parse_config_text(const std::string& text, const std::string& name) {
    FullConfig cfg;
    ParseCursor at{name};
    std::istringstream is(text);
    std::string raw;
    std::string section;

    while (std::getline(is, raw)) {
        ++at.line_no;
        std::string line = raw;
        if (const auto hash = line.find(" #"); hash != std::string::npos) line.erase(hash);
        if (const auto hash = line.find("\t#"); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;

        if (line.front() == '[') {
            if (line.back() != ']') at.fail("unterminated section header");
            section = line.substr(1, line.size() - 2);
            if (section != "population" && section != "consensus" && section != "kuramoto" &&
                section != "schedule" && section != "run" && section != "sweep" &&
                section != "dataset" && section != "train") {
                at.fail("unknown section [" + section + "]");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) at.fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) at.fail("missing key before '='");
        if (value.empty()) at.fail("missing value for key '" + key + "'");
        if (section.empty()) at.fail("key '" + key + "' appears before any [section]");

        PopulationConfig& pop = cfg.population;
        if (section == "population") {
            cfg.has_population = true;
            if (key == "count") pop.n = at.count(value);
            else if (key == "seed") pop.seed = at.seed(value);
            else if (key == "power_min_kw") pop.power_min_kw = at.number(value);
            else if (key == "power_max_kw") pop.power_max_kw = at.number(value);
            else if (key == "duty_min") pop.duty_min = at.number(value);
            else if (key == "duty_max") pop.duty_max = at.number(value);
            else if (key == "freq_min_hz") pop.freq_min_hz = at.number(value);
            else if (key == "freq_max_hz") pop.freq_max_hz = at.number(value);
            else if (key == "deadband_c") pop.deadband_c = at.number(value);
            else if (key == "set_point_c") pop.set_point_c = at.number(value);
            else if (key == "ambient_c") pop.ambient_c = at.number(value);
            else if (key == "eta") pop.eta = at.number(value);
            else if (key == "protocol") pop.protocol = at.protocol(value);
            else if (key == "record_switch_matrix") pop.record_switch_matrix = at.boolean(value);
            else at.fail("unknown key '" + key + "' in [population]");
        } else if (section == "consensus") {
            if (key == "weight") pop.consensus_weight = at.number(value);
            else if (key == "step_s") pop.consensus_step_s = at.number(value);
            else if (key == "tol_hz") pop.consensus_tol_hz = at.number(value);
            else at.fail("unknown key '" + key + "' in [consensus]");
        } else if (section == "kuramoto") {
            if (key == "coupling") pop.kuramoto_coupling = at.number(value);
            else if (key == "frequency_correction") pop.kuramoto_freq_correction = at.number(value);
            else at.fail("unknown key '" + key + "' in [kuramoto]");
        } else if (section == "schedule") {
            if (key == "consensus_start_s") cfg.consensus_start_s = at.number(value);
            else if (key == "desync_start_s") cfg.desync_start_s = at.number(value);
            else if (key == "alpha_scale") cfg.alpha_scale = at.number(value);
            else at.fail("unknown key '" + key + "' in [schedule]");
        } else if (section == "run") {
            if (key == "duration_s") cfg.run.duration_s = at.number(value);
            else if (key == "dt_s") cfg.run.dt_s = at.number(value);
            else at.fail("unknown key '" + key + "' in [run]");
        } else if (section == "sweep") {
            if (key == "grid_size") cfg.sweep.grid_size = at.count(value);
            else at.fail("unknown key '" + key + "' in [sweep]");
        } else if (section == "dataset") {
            if (key == "n_min") cfg.dataset.n_min = at.count(value);
            else if (key == "n_max") cfg.dataset.n_max = at.count(value);
            else if (key == "n_stride") cfg.dataset.n_stride = at.count(value);
            else if (key == "grid_size") cfg.dataset.grid_size = at.count(value);
            else at.fail("unknown key '" + key + "' in [dataset]");
        } else if (section == "train") {
            if (key == "epochs") cfg.train.epochs = at.count(value);
            else if (key == "batch_size") cfg.train.batch_size = at.count(value);
            else if (key == "learning_rate") cfg.train.learning_rate = at.number(value);
            else if (key == "patience") cfg.train.patience = at.count(value);
            else if (key == "val_fraction") cfg.train.val_fraction = at.number(value);
            else if (key == "split_ratio") cfg.train.split_ratio = at.number(value);
            else at.fail("unknown key '" + key + "' in [train]");
        }
    }

    cfg.resolve_schedule();
    if (cfg.has_population) {
        cfg.dataset.base = cfg.population;
    }
    cfg.dataset.seed = cfg.population.seed;
    return cfg;
}

FullConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << is.rdbuf();
    return parse_config_text(buffer.str(), path);
}

} // namespace tclswarm
