#pragma once

#include <stdexcept>
#include <string>

namespace diracsol {

/// Input rejected before (or instead of) running numerics.
class ValidationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine did not meet its contract.
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace diracsol
