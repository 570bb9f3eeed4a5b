#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace shp {

inline constexpr const char* kToolVersion = "0.1.0";

// Replay record written next to every command's outputs: inputs are pinned
// by digest, outputs listed, seeds recorded.
struct RunManifest {
    std::string tool_version = kToolVersion;
    std::string command;
    std::string config_json; // inline channel config, when one applies
    std::map<std::string, std::uint64_t> seeds;
    std::vector<std::pair<std::string, std::string>> inputs; // (path, sha256)
    std::vector<std::string> outputs;
    std::uint64_t wall_clock_ms = 0;

    void add_input(const std::string& path); // digests the file
    std::string to_json() const;
    void write(const std::string& path) const;
};

} // namespace shp
