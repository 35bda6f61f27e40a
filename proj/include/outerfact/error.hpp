#pragma once

#include <stdexcept>
#include <string>

namespace outerfact {

enum class ErrorKind {
  validation,    // malformed input, dimension mismatch, violated precondition
  not_psd,       // input is not positive semidefinite within tolerance
  numerical,     // tolerance-level breakdown (e.g. rank of Y exceeds block size)
  io,
};

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

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::validation, what);
}

}  // namespace outerfact
