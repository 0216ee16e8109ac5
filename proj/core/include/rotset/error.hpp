#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rotset {

/// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorCode {
  kInvalidInput,     ///< bad argument to a pure function
  kConfig,           ///< billiard configuration or graph bound rejected
  kSolver,           ///< variational solver did not converge / certify
  kInvariant,        ///< a mathematical invariant failed at runtime
  kNotImplemented,   ///< documented unsupported case (e.g. m > 2 channels)
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace rotset
