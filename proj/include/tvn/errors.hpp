#pragma once

#include <stdexcept>
#include <string>

namespace tvn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wrong dimensions between operands (matrix/tensor shape disagreement).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Mode or element index out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

// Construction or input data violates a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// One spectrum has positive mass where the other is zero, so per-index
// singular-value ratios are undefined.
class RankMismatchError : public Error {
 public:
  using Error::Error;
};

// Structure recovery could not certify the witness (tied spectra,
// non-proportional core rows, mass outside the diagonal blocks).
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

// Caller-checkable requirement not met (e.g. equality does not hold).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace tvn
