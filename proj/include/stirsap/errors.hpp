#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stirsap {

// Base class for every error raised by the library. The CLI maps these to
// exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (time outside [0, T], invalid
// configuration).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Caller broke a precondition: wrong dimension, missing derived quantity,
// mismatched grids.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Both Raman pulses vanish where a ratio of them is required.
class DegeneratePulseError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class SearchError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace stirsap
