#pragma once

#include <stdexcept>
#include <string>

namespace qmcrf {

// Bad user-supplied configuration (CLI maps this to exit code 2).
class config_error : public std::invalid_argument {
  public:
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure: factorization breakdown, residual blow-up, degenerate
// calibration (CLI maps this to exit code 3).
class numeric_error : public std::runtime_error {
  public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qmcrf
