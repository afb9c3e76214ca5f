#pragma once

// Run manifests: every file written by the tool gets a sibling
// <file>.manifest.json recording how to regenerate it.

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gstwdp::cli {

struct RunManifest {
    std::string subcommand;
    std::vector<std::string> args;  // argument vector after the program name, resolved
    nlohmann::json parameters = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
    std::string version;
    std::string timestamp;  // UTC, ISO 8601
    std::string output;

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);

    void write(const std::string& path) const;
    static RunManifest read(const std::string& path);
};

std::string manifest_path(const std::string& output);
std::string utc_timestamp();
const char* tool_version();

}  // namespace gstwdp::cli
