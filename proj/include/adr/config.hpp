#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace adr {

/// One key=value line from a config file, with its source line number for
/// error reporting. Keys may repeat; order is preserved.
struct KvEntry {
    std::string key;
    std::string value;
    int line = 0;
};

/// Read a key=value file: one pair per line, '#' starts a comment line,
/// blank lines are skipped, whitespace around keys and values is trimmed.
std::vector<KvEntry> parse_kv_file(const std::filesystem::path& path);

}  // namespace adr
