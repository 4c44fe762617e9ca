#pragma once

#include <stdexcept>
#include <string>

namespace dgsl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  int line() const { return line_; }

private:
  int line_ = 0;
};

class NonConformingMesh : public Error {
  using Error::Error;
};

class PerturbationFoldover : public Error {
  using Error::Error;
};

class DegenerateElement : public Error {
  using Error::Error;
};

class UnsupportedDegree : public Error {
  using Error::Error;
};

class IndexOutOfRange : public Error {
  using Error::Error;
};

class InvalidArgument : public Error {
  using Error::Error;
};

class IndefiniteOperator : public Error {
  using Error::Error;
};

class NewtonDiverged : public Error {
  using Error::Error;
};

class InsufficientLevels : public Error {
  using Error::Error;
};

class ConfigError : public Error {
  using Error::Error;
};

}  // namespace dgsl
