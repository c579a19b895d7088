#pragma once

#include <stdexcept>
#include <string>

namespace argocast {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class CsvError : public Error {
 public:
  using Error::Error;
};

// A daily series has a hole in its calendar; message names the first gap.
class NonContiguousError : public CsvError {
 public:
  NonContiguousError(const std::string& msg, const std::string& gap_date)
      : CsvError(msg), gap_date_(gap_date) {}
  const std::string& gap_date() const { return gap_date_; }

 private:
  std::string gap_date_;
};

class UnknownRegionError : public Error {
 public:
  using Error::Error;
};

class IncompleteCoverageError : public Error {
 public:
  using Error::Error;
};

class SeriesTooShortError : public Error {
 public:
  using Error::Error;
};

class EmptySelectionError : public Error {
 public:
  using Error::Error;
};

class InsufficientHistoryError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace argocast
