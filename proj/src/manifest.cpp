#include "tclswarm/manifest.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "tclswarm/errors.hpp"
#include "tclswarm/rng.hpp"

namespace tclswarm {

std::string hash_file_hex(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot hash missing file: " + path);
    std::ostringstream buffer;
    buffer << is.rdbuf();
    const std::uint64_t h = fnv1a64(buffer.str());
    std::ostringstream hex;
    hex << std::hex << std::setfill('0') << std::setw(16) << h;
    return hex.str();
}

void RunManifest::add_output(const std::string& path) {
    outputs.emplace_back(path, hash_file_hex(path));
}

void RunManifest::write(const std::string& path) const {
    nlohmann::ordered_json doc;
    doc["subcommand"] = subcommand;
    doc["master_seed"] = master_seed;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [key, value] : config_snapshot) cfg[key] = value;
    doc["config"] = cfg;
    nlohmann::ordered_json outs = nlohmann::ordered_json::array();
    for (const auto& [file, hash] : outputs) {
        outs.push_back({{"path", file}, {"fnv1a64", hash}});
    }
    doc["outputs"] = outs;
    doc["wall_clock_s"] = wall_clock_s;

    std::ofstream os(path);
    if (!os) throw IoError("cannot open manifest for writing: " + path);
    os << doc.dump(2) << '\n';
    if (!os) throw IoError("failed writing manifest: " + path);
}

} // namespace tclswarm
