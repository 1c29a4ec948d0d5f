#pragma once

#include <stdexcept>
#include <string>

namespace romr {

/// Base for every error raised by the library. Each module derives a type
/// carrying its own code enum so callers can branch without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Code>
class CodedError : public Error {
 public:
  CodedError(Code code, const std::string& what) : Error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

}  // namespace romr
