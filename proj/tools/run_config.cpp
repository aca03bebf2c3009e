#include "run_config.hpp"

#include "polaron/registry.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace polaron::cli {

const char* const tool_version = "0.1.0";

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key.find_first_of(" \t") != std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": invalid key");
        if (key == "config") throw std::runtime_error(path + ": config files cannot include other config files");
        out[key] = value;
    }
    return out;
}

std::vector<std::string> merge_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string path;
    std::set<std::string> given;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) continue;
        const auto eq = a.find('=');
        const std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
        given.insert(key);
        if (key == "config") {
            if (eq != std::string::npos)
                path = a.substr(eq + 1);
            else if (i + 1 < args.size())
                path = args[i + 1];
        }
    }
    if (path.empty()) return args;
    for (const auto& [k, v] : read_config_file(path)) {
        if (given.count(k)) continue;
        args.push_back("--" + k);
        args.push_back(v);
    }
    return args;
}

std::string Manifest::write(const std::string& dir) const {
    nlohmann::json j;
    j["command"] = command;
    j["tool_version"] = tool_version;
    j["created"] = utc_timestamp();
    j["inputs"] = inputs;
    j["registry_hash"] = registry_hash.empty() ? nlohmann::json(nullptr) : nlohmann::json(registry_hash);
    j["outputs"] = outputs;
    const std::string path = (std::filesystem::path(dir) / (command + "_manifest.json")).string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
    return path;
}

}  // namespace polaron::cli
