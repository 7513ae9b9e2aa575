#pragma once

#include <stdexcept>
#include <string>

namespace dothash {

/// Malformed input data or incompatible operands (bad file, mismatched
/// sketches, invalid weights). Argument-range mistakes use
/// std::invalid_argument instead.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dothash
