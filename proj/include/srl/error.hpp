#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace srl {

// Invalid configuration: incompatible layer chain, bad environment name, ...
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector or matrix length does not match the expected layout.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke an operation precondition (invalid action, empty buffer, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A self-modification step produced NaN or Inf.
class NumericError : public std::runtime_error {
 public:
  NumericError(std::size_t layer, const std::string& what)
      : std::runtime_error(what), layer_(layer) {}

  std::size_t layer() const noexcept { return layer_; }

 private:
  std::size_t layer_;
};

}  // namespace srl
