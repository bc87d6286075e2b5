#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tgsm {

/// Argument outside the mathematical domain of an operation (e.g. theta <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Vector/tensor sizes that do not match the configured spaces.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linear algebra failure: non-SPD matrix, failed factorisation, residual too large.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// An iteration ran out of budget. Carries the residual history.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }
  double last_residual() const { return trace_.empty() ? 0.0 : trace_.back(); }

 private:
  std::vector<double> trace_;
};

/// Config text that cannot be parsed. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(format(msg, line, column)), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& msg, int line, int column) {
    return "parse error at line " + std::to_string(line) + ", column " +
           std::to_string(column) + ": " + msg;
  }
  int line_;
  int column_;
};

/// Collected constraint violations. Every message names an (A-n) assumption tag.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "validation failed:";
    for (const auto& s : v) out += "\n  " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace tgsm
