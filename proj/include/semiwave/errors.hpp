#pragma once

#include <stdexcept>
#include <string>

namespace semiwave {

// Exit codes used by the CLI: 0 ok, 2 config error, 3 numerical failure,
// 4 hypothesis-validation failure.
enum class ErrorKind { Config = 2, Numerical = 3, Hypothesis = 4 };

// Every operation failure carries a stable machine-readable name
// (e.g. "OutOfStrip", "NoRoot") next to the human-readable message.
class Failure : public std::runtime_error {
public:
  Failure(ErrorKind kind, std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), kind_(kind), name_(std::move(name)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
  ErrorKind kind_;
  std::string name_;
};

[[noreturn]] inline void fail_config(const std::string& name, const std::string& what) {
  throw Failure(ErrorKind::Config, name, what);
}
[[noreturn]] inline void fail_numeric(const std::string& name, const std::string& what) {
  throw Failure(ErrorKind::Numerical, name, what);
}
[[noreturn]] inline void fail_hypothesis(const std::string& name, const std::string& what) {
  throw Failure(ErrorKind::Hypothesis, name, what);
}

}  // namespace semiwave
