#pragma once

#include <stdexcept>
#include <string>

namespace hcalg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The computation could not decide within its horizon or search budget.
// Callers map this to "inconclusive" rather than "failed".
class Inconclusive : public Error {
 public:
  using Error::Error;
};

}  // namespace hcalg
