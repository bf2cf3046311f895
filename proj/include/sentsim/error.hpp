#pragma once

#include <stdexcept>
#include <string>

namespace sentsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// A record or line violates the expected on-disk format.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Invalid or missing configuration (bad flags, missing auth token, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Transport or HTTP failure after retries are exhausted.
class GatewayError : public Error {
 public:
  using Error::Error;
};

// Replay store has no entry for a prompt while running in strict mode.
class ReplayMissError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

// A completion did not contain a usable similarity score.
class ScoreParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace sentsim
