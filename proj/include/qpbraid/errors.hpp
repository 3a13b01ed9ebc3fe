#pragma once

#include <stdexcept>
#include <string>

namespace qpbraid {

/// Malformed user input: bad words, JSON, expressions, infeasible requests.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed. diagnostics() is a JSON object (as text)
/// with whatever state the failing routine could report.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, std::string diagnostics = "{}")
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace qpbraid
