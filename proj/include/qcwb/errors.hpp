#pragma once

#include <stdexcept>
#include <string>

namespace qcwb {

// Malformed or out-of-contract input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration or size budget would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A promised property of a construction was observed to fail.
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcwb
