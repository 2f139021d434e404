#pragma once

#include <stdexcept>
#include <string>

namespace nng {

// Base for every contract violation raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad edge lists, codec strings, out-of-range ids.
class InvalidInput : public Error {
public:
  using Error::Error;
};

// A size or memory guard refused the request.
class GuardExceeded : public Error {
public:
  using Error::Error;
};

// Limit-mode evaluation hit a zero receive probability.
class Divergence : public Error {
public:
  explicit Divergence(const std::string& what)
      : Error(what + " (diverges in limit mode; use finite epsilon)") {}
};

// Iterative solver or generator gave up.
class NotConverged : public Error {
public:
  using Error::Error;
};

}  // namespace nng
