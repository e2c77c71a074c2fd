#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace adr {

/// Error with a stable category tag. The CLI prints the tag as a
/// machine-parseable identifier; everything else is free-form message text.
class Error : public std::runtime_error {
public:
    Error(std::string tag, const std::string& message)
        : std::runtime_error(message), tag_(std::move(tag)) {}

    const std::string& tag() const noexcept { return tag_; }

private:
    std::string tag_;
};

[[noreturn]] inline void fail(std::string tag, const std::string& message) {
    throw Error(std::move(tag), message);
}

}  // namespace adr
