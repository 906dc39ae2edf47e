#pragma once

#include <stdexcept>
#include <string>

namespace densedisc {

// Argument outside the domain of a geometric operation (e.g. |z| >= 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or inconsistent configuration / input data.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure did not reach its target; carries the best value seen.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best)
      : std::runtime_error(what), best_(best) {}
  double best() const { return best_; }

 private:
  double best_;
};

}  // namespace densedisc
