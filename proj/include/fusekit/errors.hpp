#pragma once

#include <stdexcept>
#include <string>

namespace fusekit {

// Bad flags, config values, or incompatible parameters (CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data (CLI exit code 2).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public DataError {
public:
    ParseError(const std::string& msg, std::size_t line)
        : DataError("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace fusekit
