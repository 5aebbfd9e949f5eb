#pragma once

#include <stdexcept>
#include <string>

namespace plurilab {

enum class ErrorCode {
  Domain,
  Invariant,
  EmptySublevel,
  NotIntegrable,
  NotInF,
  Inadmissible,
  Parse,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::Invariant: return "INVARIANT";
    case ErrorCode::EmptySublevel: return "EMPTY_SUBLEVEL";
    case ErrorCode::NotIntegrable: return "NOT_INTEGRABLE";
    case ErrorCode::NotInF: return "NOT_IN_F";
    case ErrorCode::Inadmissible: return "INADMISSIBLE";
    case ErrorCode::Parse: return "PARSE";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace plurilab
