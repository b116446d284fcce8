#pragma once

#include <stdexcept>
#include <string>

namespace carleson {

enum class ErrorCode {
  invalid_argument,
  parse_error,
  branch_jump,
  all_annuli_empty,
  grid_too_narrow,
  not_locally_integrable,
  empty_arc,
  no_admissible_delta,
};

// Precondition failures map to CLI exit code 2, numerical failures to 3.
inline bool is_precondition(ErrorCode code) {
  switch (code) {
  case ErrorCode::invalid_argument:
  case ErrorCode::parse_error:
  case ErrorCode::grid_too_narrow:
  case ErrorCode::empty_arc:
    return true;
  default:
    return false;
  }
}

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline void require(bool condition, const std::string& what) {
  if (!condition)
    throw Error(ErrorCode::invalid_argument, what);
}

} // namespace carleson
