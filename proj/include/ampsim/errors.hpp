#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ampsim {

// Invalid user input: a parameter violates a type invariant. Maps to CLI exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failures map to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The base current left the tan domain 0 <= s*i_b < pi/2 of the Early model.
class DomainError : public NumericalError {
public:
    explicit DomainError(const std::string& what, std::optional<std::size_t> sample = std::nullopt)
        : NumericalError(sample ? what + " (sample " + std::to_string(*sample) + ")" : what),
          sample_(sample) {}

    std::optional<std::size_t> sample() const { return sample_; }

private:
    std::optional<std::size_t> sample_;
};

// Forward integration blew up; dt too coarse for the load time constant.
class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace ampsim
