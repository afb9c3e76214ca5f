#include "manifest.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

#ifndef GSTWDP_VERSION
#define GSTWDP_VERSION "unknown"
#endif

namespace gstwdp::cli {

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["subcommand"] = subcommand;
    j["args"] = args;
    j["parameters"] = parameters;
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    j["version"] = version;
    j["timestamp"] = timestamp;
    j["output"] = output;
    return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    if (j.contains("parameters")) m.parameters = j.at("parameters");
    if (j.contains("seed") && !j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.value("version", "");
    m.timestamp = j.value("timestamp", "");
    m.output = j.value("output", "");
    return m;
}

void RunManifest::write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write manifest " + path);
    f << to_json().dump(2) << '\n';
}

RunManifest RunManifest::read(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open manifest " + path);
    return from_json(nlohmann::json::parse(f));
}

std::string manifest_path(const std::string& output) { return output + ".manifest.json"; }

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

const char* tool_version() { return GSTWDP_VERSION; }

}  // namespace gstwdp::cli
