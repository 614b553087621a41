#pragma once

#include <stdexcept>
#include <string>

namespace twosided {

enum class ErrorKind {
  kInvalidArgument,
  kPrecondition,
  kOutOfSupport,
  kSchema,
  kBudgetExceeded,
  kIo,
  kInternal,
};

/// Single exception type for the library; the kind maps onto C API status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace twosided
