#pragma once

#include <stdexcept>
#include <string>

namespace ccx {

enum class ErrorCode {
  invalid_argument,
  domain_mismatch,
  empty_mask,
  bad_params,
  m_too_small,
  not_in_hull,
  size_guard,
  io,
  format,
  unknown_fixture,
  internal,
};

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace ccx
