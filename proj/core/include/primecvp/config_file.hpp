#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

namespace primecvp {

/// `key = value` lines; blank lines and `#` comments are skipped, keys are
/// trimmed and must be unique.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(std::istream& in);
ConfigMap load_config(const std::filesystem::path& path);

}  // namespace primecvp
