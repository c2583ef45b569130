#pragma once

#include <stdexcept>
#include <string>

namespace quasivar {

// Malformed input: syntax errors, unknown symbols, ill-sorted terms.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
  InputError(const std::string& what, int line, int column)
      : std::runtime_error(what + " at line " + std::to_string(line) +
                           ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

// A checked theorem failed on a concrete instance. Always an engine bug.
class TheoremViolation : public std::logic_error {
 public:
  explicit TheoremViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace quasivar
