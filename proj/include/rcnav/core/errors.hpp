#pragma once

#include <stdexcept>
#include <string>

namespace rcnav {

/// Argument outside an operation's mathematical domain (non-finite angle, dt <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid configuration value (even rollout count, zero actuator gain, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Map or log file could not be read. The message names the path and the defect.
class LoadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bus / wire protocol violation (type mismatch, unknown source, malformed frame).
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rcnav
