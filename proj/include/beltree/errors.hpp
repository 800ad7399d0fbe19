#pragma once

#include <stdexcept>
#include <string>

namespace beltree {

// Error taxonomy; the numeric values double as CLI exit codes.
enum class ErrorKind { usage = 1, data = 2, numeric = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& w) : Error(ErrorKind::usage, w) {}
};

// Malformed input: bad files, bad labels, scope misuse.
class DataError : public Error {
 public:
  explicit DataError(const std::string& w) : Error(ErrorKind::data, w) {}
};

class ScopeError : public DataError {
 public:
  explicit ScopeError(const std::string& w) : DataError(w) {}
};

// A dense subset-lattice operation was requested on a frame that is too large.
class DenseLimitError : public DataError {
 public:
  explicit DenseLimitError(const std::string& w) : DataError(w) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& w) : Error(ErrorKind::numeric, w) {}
};

// Raised when a commonality quotient is undefined (zero divisor under nonzero
// dividend); carries enough context to point at the offending step.
class DecombinationError : public NumericError {
 public:
  explicit DecombinationError(const std::string& w) : NumericError(w) {}
};

}  // namespace beltree
