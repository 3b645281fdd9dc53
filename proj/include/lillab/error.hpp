#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lillab {

enum class ErrorKind { invalid_input, unknown_name, numerical_failure, non_convergence, io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorKind::invalid_input, what) {}
};

class UnknownName : public Error {
 public:
  explicit UnknownName(const std::string& what) : Error(ErrorKind::unknown_name, what) {}
};

// Carries the state at which a callback produced non-finite output.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, std::vector<double> state)
      : Error(ErrorKind::numerical_failure, what), state_(std::move(state)) {}
  const std::vector<double>& state() const noexcept { return state_; }

 private:
  std::vector<double> state_;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::string diagnostics)
      : Error(ErrorKind::non_convergence, what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInput(what);
}

}  // namespace lillab
