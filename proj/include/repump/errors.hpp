#pragma once

#include <stdexcept>
#include <string>

namespace repump {

// Numerical failure (step-size underflow, iteration cap in a place where the
// contract promises convergence). Maps to exit code 2 in the CLI.
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// A dataset that cannot determine the model parameters.
class insufficient_data_error : public std::domain_error {
 public:
  explicit insufficient_data_error(const std::string& what) : std::domain_error(what) {}
};

// Malformed or schema-violating experiment config. Maps to exit code 1.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace repump
