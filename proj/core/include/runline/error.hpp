#pragma once

#include <stdexcept>
#include <string>

namespace runline {

/// Base class for all errors raised by the library. Messages always carry
/// enough context (file, line number, game_id, ...) to act on without a
/// debugger.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input files that do not conform to their schema.
class IngestError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or argument values.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace runline
