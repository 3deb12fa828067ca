#pragma once

#include <stdexcept>
#include <string>

namespace maca {

// Base of every error raised by the library. Subclasses map onto CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand sizes disagree (state vs rule vector, pattern vs classifier width).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Request exceeds a hard size limit (enumeration above 20 cells, states above 64 cells).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Trajectory did not revisit a state within the step budget.
class BudgetExhaustedError : public Error {
 public:
  using Error::Error;
};

// Invalid numeric or structural parameter supplied by the caller.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Invalid user data: bad alphabet, malformed annotation, empty training set.
class InputError : public Error {
 public:
  using Error::Error;
};

// Text that does not follow an expected file format (FASTA, annotation sidecar, manifest).
class FormatError : public Error {
 public:
  using Error::Error;
};

// A referenced file does not exist or cannot be opened.
class LoadError : public Error {
 public:
  using Error::Error;
};

// Model file is truncated or fails its checksum.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Model file was written by an incompatible format version.
class VersionError : public Error {
 public:
  using Error::Error;
};

// Least-squares system has no information (all-zero input signal).
class DegenerateSystemError : public Error {
 public:
  using Error::Error;
};

}  // namespace maca
