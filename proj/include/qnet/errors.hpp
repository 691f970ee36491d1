#pragma once

#include <stdexcept>
#include <string>

namespace qnet {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration value (or topology file field) violates its domain.
// The message starts with the offending key.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class ZeroProbability : public Error {
 public:
  ZeroProbability()
      : Error("p_success is zero: expected generation time diverges") {}
};

class UnknownNode : public Error {
 public:
  using Error::Error;
};

class NotAPath : public Error {
 public:
  using Error::Error;
};

class Unreachable : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qnet
