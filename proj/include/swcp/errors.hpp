#pragma once

#include <stdexcept>
#include <string>

namespace swcp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or out-of-range parameter.
class ParamError : public Error {
 public:
  using Error::Error;
};

// Malformed, inconsistent, or insufficient input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Operation called while its stated precondition does not hold.
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace swcp
