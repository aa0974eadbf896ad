#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hystflow {

/// Argument outside the domain of an operation (negative threshold, wrong
/// branch side, u < 0 for the primary wetting curve, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class InvalidThreshold : public DomainError {
  public:
    using DomainError::DomainError;
};

/// Flux exponent not supported by the requested construction.
class UnsupportedExponent : public DomainError {
  public:
    using DomainError::DomainError;
};

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved tolerance " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

  private:
    double achieved_;
};

class NonConvergence : public std::runtime_error {
  public:
    NonConvergence(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

  private:
    double residual_;
    int iterations_;
};

/// A runtime-checked invariant of the scheme (L-infinity bound, energy
/// inequality) failed beyond its tolerance.
class InvariantViolation : public std::runtime_error {
  public:
    InvariantViolation(const std::string& what, std::size_t step)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}

    std::size_t step() const noexcept { return step_; }

  private:
    std::size_t step_;
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace hystflow
