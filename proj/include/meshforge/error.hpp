#pragma once

#include <stdexcept>
#include <string>

namespace meshforge {

// Domain error. Everything the library can reject (bad arguments, bad
// files, topology violations) is reported through this type; the message
// names the failed check and, for parsers, the offending line.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace meshforge
