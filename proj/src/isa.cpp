#include "mram/isa.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>

namespace mram {

namespace {

constexpr std::array<std::string_view, 14> kNames = {
    "LOAD", "ADD", "SUB", "MUL", "DIV", "AND", "OR",
    "XOR",  "SHL", "SHR", "JUMP", "JZ", "JNZ", "HALT"};

}  // namespace

std::string_view opcode_name(Opcode op) { return kNames[static_cast<std::size_t>(op)]; }

std::optional<Opcode> opcode_from_name(std::string_view name) {
  if (name.size() > 4) return std::nullopt;
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == upper) return static_cast<Opcode>(i);
  return std::nullopt;
}

std::size_t operand_count(Opcode op) {
  switch (op) {
    case Opcode::LOAD: return 2;
    case Opcode::JUMP:
    case Opcode::HALT: return 0;
    case Opcode::JZ:
    case Opcode::JNZ: return 1;
    default: return 3;
  }
}

bool has_target(Opcode op) { return op == Opcode::JUMP || op == Opcode::JZ || op == Opcode::JNZ; }

bool writes_destination(Opcode op) { return operand_count(op) >= 2; }

std::vector<Defect> validate(const Program& program) {
  std::vector<Defect> defects;
  for (std::size_t i = 0; i < program.instructions.size(); ++i) {
    const Instruction& ins = program.instructions[i];
    const std::size_t want = operand_count(ins.op);
    if (ins.operands.size() != want) {
      defects.push_back({i, "arity: " + std::string(opcode_name(ins.op)) + " requires " +
                                std::to_string(want + (has_target(ins.op) ? 1 : 0)) +
                                " operands"});
    }
    if (has_target(ins.op)) {
      if (!ins.target)
        defects.push_back({i, "missing jump target"});
      else if (*ins.target >= program.instructions.size())
        defects.push_back({i, "target out of range"});
    } else if (ins.target) {
      defects.push_back({i, "unexpected jump target"});
    }
    if (writes_destination(ins.op) && !ins.operands.empty() &&
        ins.operands[0].kind == OperandKind::Literal)
      defects.push_back({i, "literal destination"});
  }
  return defects;
}

std::uint64_t address_bitlen(std::uint64_t a) {
  return a == 0 ? 1 : static_cast<std::uint64_t>(std::bit_width(a));
}

std::uint64_t log_cost_from_bits(std::span<const std::uint64_t> value_bits,
                                 std::span<const std::uint64_t> addresses) {
  std::uint64_t cost = 1;
  for (auto b : value_bits) cost += b;
  for (auto a : addresses) cost += address_bitlen(a);
  return cost;
}

std::uint64_t instruction_cost(const Instruction&, std::span<const Word> values,
                               std::span<const std::uint64_t> addresses, CostModel model) {
  if (model == CostModel::Unit) return 1;
  std::vector<std::uint64_t> bits;
  bits.reserve(values.size());
  for (const auto& v : values) bits.push_back(v.bitlen());
  return log_cost_from_bits(bits, addresses);
}

std::size_t ProgramBuilder::emit(Opcode op, std::vector<Operand> operands) {
  program_.instructions.push_back({op, std::move(operands), std::nullopt});
  return program_.instructions.size() - 1;
}

std::size_t ProgramBuilder::jump(Opcode op, std::vector<Operand> operands, std::string label) {
  std::size_t at = emit(op, std::move(operands));
  fixups_.emplace_back(at, std::move(label));
  return at;
}

void ProgramBuilder::label(std::string name) {
  if (program_.labels.contains(name))
    throw PreconditionError("duplicate label '" + name + "'");
  program_.labels.emplace(std::move(name), program_.instructions.size());
}

Program ProgramBuilder::finish() && {
  for (auto& [at, name] : fixups_) {
    auto it = program_.labels.find(name);
    if (it == program_.labels.end()) throw PreconditionError("undefined label '" + name + "'");
    program_.instructions[at].target = it->second;
  }
  if (auto defects = validate(program_); !defects.empty())
    throw PreconditionError("built program is invalid at " + std::to_string(defects[0].index) +
                            ": " + defects[0].message);
  return std::move(program_);
}

}  // namespace mram
