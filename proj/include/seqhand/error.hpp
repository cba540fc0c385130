#pragma once

#include <stdexcept>
#include <string>

namespace seqhand {

// Coarse failure categories. They map one-to-one onto the C API status codes
// and onto the category token the CLI prints on failure.
enum class ErrorKind {
  InvalidArgument,
  Io,
  Parse,
  Numeric,
  Validation,
  Internal,
};

const char* error_kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace seqhand
