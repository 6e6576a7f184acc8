#pragma once

#include <stdexcept>
#include <string>

namespace relcoll {

/// Raised when a kinematic quantity needs g > 0 but the pair coincides.
class DegeneratePairError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation point lies outside the momentum grid [-V, V]^3.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Time step collapsed below the stagnation threshold.
class StagnationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite value produced during time integration.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration text could not be parsed or failed validation.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, int line, const std::string& what)
      : std::runtime_error(format(key, line, what)), key_(key), line_(line) {}

  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& what) {
    std::string out = "config";
    if (line > 0) out += " line " + std::to_string(line);
    if (!key.empty()) out += " [" + key + "]";
    return out + ": " + what;
  }

  std::string key_;
  int line_;
};

}  // namespace relcoll
