#pragma once

#include <stdexcept>
#include <string>

namespace hullwalk {

// Base for all library errors. Runtime failures (bad input to an operation,
// undefined quantities) throw this directly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model or experiment configuration. `line` is 0 when the error is
// not tied to a config file line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& message, int line = 0)
      : Error(format(field, message, line)), field_(field), message_(message), line_(line) {}

  const std::string& field() const { return field_; }
  const std::string& message() const { return message_; }
  int line() const { return line_; }

  // Same error attributed to a config line, unless it already has one.
  ConfigError at_line(int line) const { return line_ > 0 ? *this : ConfigError(field_, message_, line); }

 private:
  static std::string format(const std::string& field, const std::string& message, int line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + message;
  }

  std::string field_;
  std::string message_;
  int line_;
};

}  // namespace hullwalk
