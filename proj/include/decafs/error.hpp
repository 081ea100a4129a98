#pragma once

#include <stdexcept>
#include <string>

namespace decafs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its documented domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Input data contains values the algorithms cannot consume (NaN, inf).
class InvalidData : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// Data carries no information about the quantity being estimated,
/// e.g. a constant series has zero lag-difference variance.
class DegenerateData : public Error {
 public:
  using Error::Error;
};

/// An internal invariant of a piecewise quadratic was violated.
class StructuralError : public Error {
 public:
  using Error::Error;
};

}  // namespace decafs
