#pragma once

#include <stdexcept>
#include <string>

namespace maxrep {

// Malformed arguments: out-of-range positions, bad grids, undecodable input.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid model parameters (probabilities that do not normalize, shape mismatch).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested quantity is not computable for this model kind or budget.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mathematically undefined request, e.g. conditioning on a null event.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace maxrep
