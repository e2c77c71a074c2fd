#include "adr/readcode.hpp"

#include <fstream>

#include "adr/error.hpp"

namespace adr {

namespace {

// Locale-free: the classification must not drift with the C locale.
bool is_alnum(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Raw input echoed back in error messages, with control bytes masked so a
// stray '\t' or '\n' cannot mangle the log line.
std::string sanitize(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        out.push_back((c >= 0x20 && c < 0x7f) ? c : '?');
    }
    return out;
}

}  // namespace

ReadCode ReadCode::parse(std::string_view raw) {
    if (raw.size() != raw_size) {
        fail("MalformedCode", "code \"" + sanitize(raw) + "\" has length " +
                                  std::to_string(raw.size()) + ", expected 7");
    }
    ReadCode rc;
    int level = 0;
    bool in_padding = false;
    for (int i = 0; i < code_size; ++i) {
        char c = raw[static_cast<std::size_t>(i)];
        if (c == '.') {
            in_padding = true;
        } else if (is_alnum(c)) {
            if (in_padding) {
                fail("MalformedCode", "code \"" + sanitize(raw) +
                                          "\" has a code character after '.' padding");
            }
            ++level;
        } else {
            fail("MalformedCode",
                 "code \"" + sanitize(raw) + "\" has invalid character at position " +
                     std::to_string(i + 1));
        }
        rc.chars_[static_cast<std::size_t>(i)] = c;
    }
    if (level == 0) {
        fail("MalformedCode", "code \"" + sanitize(raw) + "\" has no code characters");
    }
    for (int i = code_size; i < raw_size; ++i) {
        char c = raw[static_cast<std::size_t>(i)];
        if (!is_alnum(c)) {
            fail("MalformedCode",
                 "code \"" + sanitize(raw) + "\" has invalid term character at position " +
                     std::to_string(i + 1));
        }
        rc.chars_[static_cast<std::size_t>(i)] = c;
    }
    rc.level_ = static_cast<std::int8_t>(level);
    return rc;
}

ReadCode ReadCode::truncated(int target_level) const {
    if (target_level < 1 || target_level > max_level) {
        fail("InvalidArgument",
             "truncation level " + std::to_string(target_level) + " outside 1..5");
    }
    ReadCode rc = *this;
    if (target_level < level_) {
        for (int i = target_level; i < code_size; ++i) {
            rc.chars_[static_cast<std::size_t>(i)] = '.';
        }
        rc.level_ = static_cast<std::int8_t>(target_level);
    }
    // Any truncation lands on the "00" term: the result names the event
    // class, not a particular term variant of it.
    rc.chars_[code_size] = '0';
    rc.chars_[code_size + 1] = '0';
    return rc;
}

CodeDictionary CodeDictionary::load(const std::filesystem::path& path, char delimiter,
                                    bool skip_header) {
    std::ifstream in(path);
    if (!in) {
        fail("IoError", "cannot open dictionary file " + path.string());
    }
    CodeDictionary dict;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_no == 1 && skip_header) {
            continue;
        }
        if (line.empty()) {
            continue;
        }
        auto pos = line.find(delimiter);
        if (pos == std::string::npos) {
            fail("FormatError", path.string() + ":" + std::to_string(line_no) +
                                    ": expected two delimited columns");
        }
        // Codes with layout typos (wrong length, stray characters) still
        // deserve descriptions, so keys are stored verbatim.
        dict.entries_[line.substr(0, pos)] = line.substr(pos + 1);
    }
    return dict;
}

void CodeDictionary::add(const ReadCode& code, std::string description) {
    entries_[code.str()] = std::move(description);
}

std::string CodeDictionary::describe(const ReadCode& code) const {
    auto it = entries_.find(code.str());
    if (it == entries_.end()) {
        return "<unknown:" + code.str() + ">";
    }
    return it->second;
}

}  // namespace adr
