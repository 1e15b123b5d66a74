#pragma once

#include <stdexcept>
#include <string>

namespace ggt {

enum class ErrorCode {
  Parse = 1,
  InvalidArgument,
  CapExceeded,
  NotIdentity,
  OutOfBall,
  Verification,
  Unsupported,
  Infeasible,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Ball too small for a query; carries the radius the caller should rebuild with.
class OutOfBallError : public Error {
 public:
  OutOfBallError(const std::string& what, unsigned needed_radius)
      : Error(ErrorCode::OutOfBall, what), needed_radius_(needed_radius) {}

  unsigned needed_radius() const noexcept { return needed_radius_; }

 private:
  unsigned needed_radius_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace ggt
