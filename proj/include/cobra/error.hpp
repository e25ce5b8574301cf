#pragma once

#include <stdexcept>
#include <string>

namespace cobra {

// Base for all library errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or configuration (bad n_super, k > N, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unreadable or malformed input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Oracle answers that contradict the closure of earlier answers.
class ContradictionError : public Error {
 public:
  using Error::Error;
};

// A replay oracle was asked a pair that is not in its log.
class ReplayDivergence : public Error {
 public:
  using Error::Error;
};

// An interactive session was cancelled while a query was pending.
class OracleAbort : public Error {
 public:
  using Error::Error;
};

}  // namespace cobra
