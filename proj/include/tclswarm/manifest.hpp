#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tclswarm {

/// Record of one CLI invocation: resolved configuration, seeds and content
/// hashes of every output file. Reruns with equal settings produce equal
/// hashes (the wall clock is informational and excluded from comparisons).
struct RunManifest {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> config_snapshot;
    std::uint64_t master_seed = 0;
    std::vector<std::pair<std::string, std::string>> outputs; ///< path, fnv1a64 hex
    double wall_clock_s = 0.0;

    void add_output(const std::string& path);
    void write(const std::string& path) const;
};

/// FNV-1a over the file bytes, as a 16-digit hex string.
[[nodiscard]] std::string hash_file_hex(const std::string& path);

} // namespace tclswarm
