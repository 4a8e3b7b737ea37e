#pragma once

#include <stdexcept>
#include <string>

namespace kaonbell {

// Invalid input to a numerical routine (negative time, non-projector, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Bad preset name, inconsistent constants, malformed state file.
class ConfigurationError : public std::invalid_argument {
public:
    explicit ConfigurationError(const std::string& what) : std::invalid_argument(what) {}
};

// A valid request that the chosen evaluation path cannot serve.
class UnsupportedConfiguration : public std::logic_error {
public:
    explicit UnsupportedConfiguration(const std::string& what) : std::logic_error(what) {}
};

} // namespace kaonbell
