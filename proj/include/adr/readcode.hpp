#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace adr {

/// Hierarchical clinical code: five code characters plus a two-character
/// term suffix. Level k means the first k code characters are specified and
/// the remaining code positions are '.' padding, so "N24..00" is a level-3
/// code and "N245.13" a level-4 one. Codes are case-sensitive.
///
/// A default-constructed ReadCode is the null placeholder ("-----00");
/// parse() and truncated() never produce it.
class ReadCode {
public:
    static constexpr int code_size = 5;
    static constexpr int term_size = 2;
    static constexpr int raw_size = 7;
    static constexpr int max_level = 5;

    ReadCode() : chars_{'-', '-', '-', '-', '-', '0', '0'}, level_(0) {}

    /// Parse the canonical 7-character form. Throws MalformedCode on wrong
    /// length, non-alphanumeric content, an all-dot code, or a code
    /// character appearing after a '.'.
    static ReadCode parse(std::string_view raw);

    std::string_view code() const { return {chars_.data(), code_size}; }
    std::string_view term() const { return {chars_.data() + code_size, term_size}; }
    int level() const { return level_; }

    /// Canonical 7-character rendering; parse(str()) round-trips.
    std::string str() const { return {chars_.data(), raw_size}; }
    std::string_view view() const { return {chars_.data(), raw_size}; }

    /// Collapse to the given level (1..5). The term suffix normalizes to
    /// "00" so term variants of one code aggregate to a single event.
    ReadCode truncated(int target_level) const;

    bool operator==(const ReadCode&) const = default;
    auto operator<=>(const ReadCode&) const = default;

private:
    std::array<char, raw_size> chars_;
    std::int8_t level_;
};

/// Lookup from canonical 7-character codes to display descriptions.
/// Missing codes get a deterministic placeholder, never an error.
class CodeDictionary {
public:
    CodeDictionary() = default;

    /// Two-column delimited text: code, description. Each line splits at the
    /// first delimiter, so descriptions may contain the delimiter themselves.
    static CodeDictionary load(const std::filesystem::path& path, char delimiter = ',',
                               bool skip_header = false);

    void add(const ReadCode& code, std::string description);
    std::string describe(const ReadCode& code) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::string> entries_;
};

}  // namespace adr

template <>
struct std::hash<adr::ReadCode> {
    std::size_t operator()(const adr::ReadCode& c) const noexcept {
        return std::hash<std::string_view>{}(c.view());
    }
};
