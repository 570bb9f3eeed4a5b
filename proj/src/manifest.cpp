#include "shp/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "shp/errors.hpp"
#include "shp/hashing.hpp"

namespace shp {

void RunManifest::add_input(const std::string& path) {
    inputs.emplace_back(path, sha256_hex_file(path));
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool_version"] = tool_version;
    j["command"] = command;
    if (!config_json.empty()) j["config"] = nlohmann::json::parse(config_json);
    j["seeds"] = seeds;
    auto in = nlohmann::ordered_json::array();
    for (const auto& [path, digest] : inputs) {
        nlohmann::ordered_json e;
        e["path"] = path;
        e["sha256"] = digest;
        in.push_back(e);
    }
    j["inputs"] = in;
    j["outputs"] = outputs;
    j["wall_clock_ms"] = wall_clock_ms;
    return j.dump(2);
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest: " + path);
    out << to_json() << '\n';
}

} // namespace shp
