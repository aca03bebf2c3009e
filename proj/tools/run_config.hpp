#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace polaron::cli {

/// Flat `key = value` file; '#' starts a comment. Throws std::runtime_error on malformed lines.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// argv with the entries of the --config file appended as `--key value`, skipping keys that
/// already appear on the command line so that flags win.
std::vector<std::string> merge_config(int argc, char** argv);

struct Manifest {
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    std::string registry_hash;
    std::vector<std::string> outputs;

    /// Writes <dir>/<command>_manifest.json and returns its path.
    std::string write(const std::string& dir) const;
};

extern const char* const tool_version;

}  // namespace polaron::cli
