#pragma once

#include <stdexcept>
#include <string>

namespace gamerep {

/// Error class, mapped to process exit codes by the CLI:
/// config -> 2, data -> 3, numeric -> 4.
enum class ErrorKind { config, data, numeric };

/// All validated failures are thrown as Error. `code` is a short stable
/// machine-parsable slug ("duplicate-game", "infeasible-split", ...), unique
/// per failure mode so callers and tests can distinguish them.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error("error[" + code + "]: " + message),
        kind_(kind),
        code_(std::move(code)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& code() const { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error config_error(const std::string& code, const std::string& msg) {
  return Error(ErrorKind::config, code, msg);
}
inline Error data_error(const std::string& code, const std::string& msg) {
  return Error(ErrorKind::data, code, msg);
}
inline Error numeric_error(const std::string& code, const std::string& msg) {
  return Error(ErrorKind::numeric, code, msg);
}

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::data: return 3;
    case ErrorKind::numeric: return 4;
  }
  return 1;
}

}  // namespace gamerep
