#pragma once

#include <stdexcept>
#include <string>

namespace gsusy {

/// Argument outside the domain of an operation (non-finite input, negative order, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class InvalidQuantumNumbers : public DomainError {
public:
    using DomainError::DomainError;
};

/// Gamma function evaluated at a non-positive integer -pole_index.
class GammaPoleError : public DomainError {
public:
    explicit GammaPoleError(int pole_index)
        : DomainError("gamma pole at x = " + std::to_string(-pole_index)), pole_index_(pole_index) {}
    int pole_index() const noexcept { return pole_index_; }

private:
    int pole_index_;
};

/// Two-term small-x Whittaker expansion requested with integer 2*mu.
class LogarithmicCaseError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Electric coupling at or above the critical value; carries nu^2 = j^2 - g^2.
class CollapseRegimeError : public std::runtime_error {
public:
    explicit CollapseRegimeError(double nu_sq)
        : std::runtime_error("collapse regime: no real bound energy (nu^2 = " + std::to_string(nu_sq) + ")"),
          nu_sq_(nu_sq) {}
    double nu_sq() const noexcept { return nu_sq_; }

private:
    double nu_sq_;
};

class NonHermitianFactorization : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ResonantRegulatorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoLevelInBracket : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GridUnderflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace gsusy
