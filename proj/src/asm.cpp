#include "mram/asm.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace mram::assembly {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }
bool is_ident_char(char c) { return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s[0])) return false;
  for (char c : s)
    if (!is_ident_char(c)) return false;
  return true;
}

std::optional<Operand> parse_operand(std::string_view tok, std::string& error) {
  tok = trim(tok);
  auto number = [&](std::string_view digits) -> std::optional<Word> {
    digits = trim(digits);
    try {
      return Word::parse(digits);
    } catch (const PreconditionError&) {
      error = "malformed number '" + std::string(digits) + "'";
      return std::nullopt;
    }
  };
  if (tok.starts_with('#')) {
    auto v = number(tok.substr(1));
    if (!v) return std::nullopt;
    return Operand::lit(*v);
  }
  if (tok.starts_with("[[") && tok.ends_with("]]") && tok.size() >= 4) {
    auto v = number(tok.substr(2, tok.size() - 4));
    if (!v) return std::nullopt;
    return Operand{OperandKind::Indirect, *v};
  }
  if (tok.starts_with('[') && tok.ends_with(']') && tok.size() >= 2) {
    auto v = number(tok.substr(1, tok.size() - 2));
    if (!v) return std::nullopt;
    return Operand{OperandKind::Direct, *v};
  }
  error = "malformed operand '" + std::string(tok) + "'";
  return std::nullopt;
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> parts;
  if (trim(s).empty()) return parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return parts;
}

}  // namespace

ParseResult parse(std::string_view text) {
  ParseResult out;
  Program prog;
  struct Ref {
    std::size_t instr;
    std::size_t line;
    std::string label;
  };
  std::vector<Ref> refs;
  std::map<std::string, std::size_t> label_lines;
  bool instr_failed = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    auto diag = [&](std::string msg) { out.diagnostics.push_back({line_no, std::move(msg)}); };

    if (auto semi = line.find(';'); semi != std::string_view::npos) line = line.substr(0, semi);
    line = trim(line);
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }

    // Optional leading label.
    std::size_t i = 0;
    while (i < line.size() && is_ident_char(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (i > 0 && j < line.size() && line[j] == ':') {
      std::string name(line.substr(0, i));
      if (!is_identifier(name)) {
        diag("invalid label name '" + name + "'");
      } else if (label_lines.contains(name)) {
        diag("duplicate label '" + name + "' (first defined on line " +
             std::to_string(label_lines[name]) + ")");
      } else {
        label_lines.emplace(name, line_no);
        prog.labels.emplace(name, prog.instructions.size());
      }
      line = trim(line.substr(j + 1));
      if (line.empty()) {
        if (eol == text.size()) break;
        continue;
      }
    }

    std::size_t k = 0;
    while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    std::string_view mnemonic = line.substr(0, k);
    auto op = opcode_from_name(mnemonic);
    if (!op) {
      diag("unknown opcode '" + std::string(mnemonic) + "'");
      instr_failed = true;
      if (eol == text.size()) break;
      continue;
    }

    auto parts = split_commas(line.substr(k));
    const std::size_t want = operand_count(*op) + (has_target(*op) ? 1 : 0);
    if (parts.size() != want) {
      diag("arity: " + std::string(opcode_name(*op)) + " requires " + std::to_string(want) +
           " operands");
      instr_failed = true;
      if (eol == text.size()) break;
      continue;
    }

    Instruction ins{*op, {}, std::nullopt};
    bool bad = false;
    const std::size_t data_count = operand_count(*op);
    for (std::size_t p = 0; p < data_count; ++p) {
      std::string err;
      auto o = parse_operand(parts[p], err);
      if (!o) {
        diag(err);
        bad = true;
        continue;
      }
      ins.operands.push_back(*o);
    }
    if (!bad && writes_destination(*op) && ins.operands[0].kind == OperandKind::Literal) {
      diag("literal destination");
      bad = true;
    }
    if (has_target(*op)) {
      std::string_view name = parts.back();
      if (!is_identifier(name)) {
        diag("malformed jump target '" + std::string(name) + "'");
        bad = true;
      } else if (!bad) {
        refs.push_back({prog.instructions.size(), line_no, std::string(name)});
      }
    }
    if (bad) {
      instr_failed = true;
    } else {
      prog.instructions.push_back(std::move(ins));
    }
    if (eol == text.size()) break;
  }

  for (const Ref& r : refs) {
    auto it = prog.labels.find(r.label);
    if (it == prog.labels.end()) {
      out.diagnostics.push_back({r.line, "undefined label '" + r.label + "'"});
    } else if (it->second >= prog.instructions.size() && !instr_failed) {
      out.diagnostics.push_back({r.line, "target out of range: label '" + r.label +
                                             "' does not precede an instruction"});
    } else {
      prog.instructions[r.instr].target = it->second;
    }
  }

  if (out.diagnostics.empty()) out.program = std::move(prog);
  return out;
}

std::string format_operand(const Operand& o) {
  switch (o.kind) {
    case OperandKind::Literal: return "#" + o.value.to_string();
    case OperandKind::Direct: return "[" + o.value.to_string() + "]";
    case OperandKind::Indirect: return "[[" + o.value.to_string() + "]]";
  }
  return {};
}

std::string print(const Program& program) {
  if (auto defects = validate(program); !defects.empty())
    throw PreconditionError("cannot print invalid program: instruction " +
                            std::to_string(defects[0].index) + ": " + defects[0].message);

  std::map<std::size_t, std::set<std::string>> names;
  std::set<std::string> taken;
  for (const auto& [name, idx] : program.labels) {
    names[idx].insert(name);
    taken.insert(name);
  }
  for (const Instruction& ins : program.instructions) {
    if (!ins.target || names.contains(*ins.target)) continue;
    std::string name = "L" + std::to_string(*ins.target);
    while (taken.contains(name)) name += "_";
    taken.insert(name);
    names[*ins.target].insert(name);
  }

  std::ostringstream os;
  auto emit_labels = [&](std::size_t idx) {
    if (auto it = names.find(idx); it != names.end())
      for (const auto& n : it->second) os << n << ":\n";
  };
  for (std::size_t i = 0; i < program.instructions.size(); ++i) {
    emit_labels(i);
    const Instruction& ins = program.instructions[i];
    os << opcode_name(ins.op);
    bool first = true;
    for (const Operand& o : ins.operands) {
      os << (first ? " " : ", ") << format_operand(o);
      first = false;
    }
    if (ins.target) os << (first ? " " : ", ") << *names.at(*ins.target).begin();
    os << "\n";
  }
  emit_labels(program.instructions.size());
  return os.str();
}

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  for (const auto& d : diags) os << "line " << d.line << ": " << d.message << "\n";
  return os.str();
}

}  // namespace mram::assembly
