// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#ifndef RISTRACK_ERROR_HPP
#define RISTRACK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ristrack {

// Two points that must be distinct coincide (zero propagation distance).
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Kernel matrix factorization failed; the caller may retry with more jitter.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ristrack

#endif  // RISTRACK_ERROR_HPP
