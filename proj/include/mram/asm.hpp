#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mram/isa.hpp"

namespace mram::assembly {

struct Diagnostic {
  std::size_t line;  // 1-based
  std::string message;
};

struct ParseResult {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
};

/// Parses `.masm` text. Every defect found is reported; a program is returned
/// only when there are none.
ParseResult parse(std::string_view text);

/// Canonical text form. Throws PreconditionError for an invalid program.
std::string print(const Program& program);

std::string format_operand(const Operand& o);
std::string format_diagnostics(const std::vector<Diagnostic>& diags);

}  // namespace mram::assembly
