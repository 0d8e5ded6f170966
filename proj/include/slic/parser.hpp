#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slic/ast.hpp"

namespace slic {

struct Diagnostic {
  int line = 1;
  int column = 1;
  std::string message;
};

struct ParseResult {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;
  [[nodiscard]] bool ok() const { return program.has_value(); }
};

[[nodiscard]] ParseResult parse(const std::string& src);

// Throws SlicError carrying "line:col: message" of the first diagnostic.
[[nodiscard]] Program parse_or_throw(const std::string& src);
[[nodiscard]] Program parse_file(const std::string& path);

[[nodiscard]] std::string pretty(const Program& p);
[[nodiscard]] std::string pretty(const StmtP& s, int indent = 0);
[[nodiscard]] std::string pretty(const ExprP& e);

// Shortest round-trip spelling; reals always carry a '.' or exponent.
[[nodiscard]] std::string format_real(double v);

}  // namespace slic
