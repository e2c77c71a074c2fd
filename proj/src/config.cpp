#include "adr/config.hpp"

#include <fstream>

#include "adr/error.hpp"

namespace adr {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) {
        return {};
    }
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

std::vector<KvEntry> parse_kv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail("IoError", "cannot open config file " + path.string());
    }
    std::vector<KvEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        auto pos = stripped.find('=');
        if (pos == std::string::npos) {
            fail("FormatError",
                 path.string() + ":" + std::to_string(line_no) + ": expected key=value");
        }
        std::string key = trim(stripped.substr(0, pos));
        std::string value = trim(stripped.substr(pos + 1));
        if (key.empty()) {
            fail("FormatError",
                 path.string() + ":" + std::to_string(line_no) + ": empty key");
        }
        entries.push_back({std::move(key), std::move(value), line_no});
    }
    return entries;
}

}  // namespace adr
