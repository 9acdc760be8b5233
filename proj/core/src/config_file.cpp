#include "primecvp/config_file.hpp"

#include <fstream>
#include <istream>

#include "primecvp/errors.hpp"

namespace primecvp {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

ConfigMap parse_config(std::istream& in) {
    ConfigMap out;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (!out.emplace(key, value).second) {
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return out;
}

ConfigMap load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in);
}

}  // namespace primecvp
