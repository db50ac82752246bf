#pragma once

#include <stdexcept>
#include <string>

namespace thinplate {

/// Raised when a computation cannot proceed for numerical reasons: a singular
/// system, a starved line search, a failed envelope certificate. Input
/// validation failures use std::invalid_argument instead.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace thinplate
