#pragma once

#include <stdexcept>
#include <string>

namespace titchlab {

// Precondition violated by the caller (bad modulus, n > x, pole of L, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A table or sweep would exceed the configured memory/size budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the range covered by a precomputed table.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace titchlab
