#pragma once

#include <stdexcept>
#include <string>

namespace pdeid {

/// Raised when a function is evaluated outside its admissible domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Raised when a grid cannot host the requested stencil or trim.
class GridError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace pdeid
