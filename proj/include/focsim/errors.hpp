#pragma once

#include <stdexcept>
#include <string>

namespace focsim {

/// Base class for all focsim runtime failures.
class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration value or parameter set.
class ConfigError : public SimError {
public:
    using SimError::SimError;
};

/// Requested window or index lies outside the recorded range.
class RangeError : public SimError {
public:
    using SimError::SimError;
};

/// Mathematical domain violation (zero divisor, slip out of range, ...).
class DomainError : public SimError {
public:
    using SimError::SimError;
};

/// Voltage reference outside the SVPWM hexagon. `rescale` is the factor
/// that brings the reference magnitude back onto the boundary.
class OverModulationError : public SimError {
public:
    OverModulationError(const std::string& msg, double rescale_factor)
        : SimError(msg), rescale(rescale_factor) {}

    double rescale;
};

/// Non-finite value produced during integration. `component` indexes the
/// offending state entry; `t` is the simulation time when known.
class DivergedError : public SimError {
public:
    DivergedError(const std::string& msg, std::size_t component,
                  double at_time = -1.0)
        : SimError(msg), component(component), t(at_time) {}

    std::size_t component;
    double t;
};

}  // namespace focsim
