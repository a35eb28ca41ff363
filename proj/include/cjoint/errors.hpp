#pragma once

#include <stdexcept>
#include <string>

namespace cjoint {

/// Thrown when H1 (or a polynomial route) hits k - w^2 + j*zeta*w == 0.
class ResonanceSingularity : public std::domain_error {
  public:
    explicit ResonanceSingularity(const std::string &what) : std::domain_error(what) {}
};

/// Iterative method ran out of iterations.
class ConvergenceError : public std::runtime_error {
  public:
    explicit ConvergenceError(const std::string &what) : std::runtime_error(what) {}
};

/// ODE integration failed (step-size underflow, non-finite state, step budget).
class IntegrationError : public std::runtime_error {
  public:
    explicit IntegrationError(const std::string &what) : std::runtime_error(what) {}
};

/// Envelope does not settle to a periodic steady state.
class NotSteadyError : public std::runtime_error {
  public:
    explicit NotSteadyError(const std::string &what) : std::runtime_error(what) {}
};

/// Config file problem; the message names the offending key.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace cjoint
