#pragma once

#include <stdexcept>
#include <string>

namespace pmcdm {

// Every error thrown by the library derives from Error and carries the
// category the CLI maps onto its exit code.
enum class ErrorCategory { Usage = 1, Data = 2, Numeric = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }
  // Machine-readable code printed by the CLI, e.g. E_DATA.
  virtual const char* code() const noexcept = 0;

 private:
  ErrorCategory category_;
};

// Mismatched vector/matrix shapes.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorCategory::Data, what) {}
  const char* code() const noexcept override { return "E_DIMENSION"; }
};

// Model parameters outside their admissible region.
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(ErrorCategory::Data, what) {}
  const char* code() const noexcept override { return "E_PARAMETER"; }
};

// Malformed or invalid input data (CSV cells, summary documents, ...).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorCategory::Data, what) {}
  const char* code() const noexcept override { return "E_DATA"; }
};

// Requested computation exceeds the configured size cap.
class SizeError : public Error {
 public:
  explicit SizeError(const std::string& what) : Error(ErrorCategory::Data, what) {}
  const char* code() const noexcept override { return "E_SIZE"; }
};

// Failed factorization, non-finite state, etc.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorCategory::Numeric, what) {}
  const char* code() const noexcept override { return "E_NUMERIC"; }
};

// File missing, unreadable or unwritable.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::Data, what) {}
  const char* code() const noexcept override { return "E_IO"; }
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorCategory::Usage, what) {}
  const char* code() const noexcept override { return "E_USAGE"; }
};

}  // namespace pmcdm
