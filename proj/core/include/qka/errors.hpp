#pragma once

#include <stdexcept>
#include <string>

namespace qka {

/// Raised when a configuration file or CLI override is malformed. Carries
/// the offending key so the harness can report it.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A non-finite value showed up inside an optimizer or kernel sum.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dataset rejection sampler could not reach the minimum acceptance rate.
class InfeasibleSpec : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qka
