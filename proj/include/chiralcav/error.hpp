#pragma once

#include <stdexcept>
#include <string>

namespace chiralcav {

enum class ErrorCode {
  InvalidArgument = 1,
  Parse,
  Validation,
  NoRoot,
  Integration,
  WindowOutOfRange,
  BracketNotFound,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Step size collapsed below the representable increment at `time`.
class IntegrationError : public Error {
 public:
  IntegrationError(double time, const std::string& what)
      : Error(ErrorCode::Integration, what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error(ErrorCode::Parse, format("", line, column, what)), line_(line), column_(column), detail_(what) {}
  // Same position, message prefixed with the source file.
  ParseError(const std::string& file, const ParseError& inner)
      : Error(ErrorCode::Parse, format(file, inner.line_, inner.column_, inner.detail_)),
        line_(inner.line_), column_(inner.column_), detail_(inner.detail_) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  // Message without the position prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string format(const std::string& file, int line, int column, const std::string& what) {
    return (file.empty() ? "" : file + ":") + std::to_string(line) + ":" + std::to_string(column) + ": " + what;
  }
  int line_;
  int column_;
  std::string detail_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace chiralcav
