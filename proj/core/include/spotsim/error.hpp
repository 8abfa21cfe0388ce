#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spotsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line() is 1-based; 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that breaks a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Illegal application-state transition or workflow invocation.
class StateError : public Error {
 public:
  using Error::Error;
};

// No acceptable answer exists (no offer meets the SLA, every EET infinite, ...).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace spotsim
