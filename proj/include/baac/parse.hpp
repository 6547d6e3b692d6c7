#ifndef BAAC_PARSE_HPP
#define BAAC_PARSE_HPP

#include <stdexcept>
#include <string>

#include "baac/ast.hpp"
#include "baac/config.hpp"

namespace baac {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int column)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Parses one theory file. Template blocks are expanded before name
// resolution; `pair` sugar is normalized away. Throws ParseError.
AgentTheory parse_theory(const std::string& text);

// Parses a standalone constraint against an already-parsed theory's
// fluent names (used by tests and fixtures).
ConstraintPtr parse_constraint_text(const std::string& text, const AgentTheory& scope);

// key=value settings. Throws ParseError on unknown keys or bad values.
RunConfig parse_settings(const std::string& text);

}  // namespace baac

#endif
