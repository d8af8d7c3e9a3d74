#pragma once

#include <stdexcept>
#include <string>

namespace investsim {

// Enumeration guard exceeded (feasible set or item count too large to scan).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// A bidder was packed at a low report and unpacked at a higher one; carries
// the witness pair.
class MonotonicityViolation : public std::runtime_error {
 public:
  MonotonicityViolation(const std::string& what, double packed_value,
                        double unpacked_value)
      : std::runtime_error(what),
        packed_value(packed_value),
        unpacked_value(unpacked_value) {}

  double packed_value;
  double unpacked_value;
};

// A caller broke an interface contract (e.g. learner feedback outside [0,1]).
class ContractViolation : public std::runtime_error {
 public:
  explicit ContractViolation(const std::string& what)
      : std::runtime_error(what) {}
};

// Malformed instance or experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace investsim
