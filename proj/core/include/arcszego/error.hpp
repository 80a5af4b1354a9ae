#pragma once

#include <stdexcept>
#include <string>

namespace arcszego {

// Invalid input: degenerate geometry, base point on the arc, evaluation at a
// singular point. The CLI maps these to exit status 2.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation that could not reach its accuracy contract. Exit status 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace arcszego
