#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mram/word.hpp"

namespace mram {

enum class Opcode { LOAD, ADD, SUB, MUL, DIV, AND, OR, XOR, SHL, SHR, JUMP, JZ, JNZ, HALT };

std::string_view opcode_name(Opcode op);
std::optional<Opcode> opcode_from_name(std::string_view name);  // case-insensitive

/// Number of memory operands (dst/src) the opcode takes, excluding any jump target.
std::size_t operand_count(Opcode op);
bool has_target(Opcode op);
bool writes_destination(Opcode op);

enum class OperandKind { Literal, Direct, Indirect };

struct Operand {
  OperandKind kind = OperandKind::Literal;
  Word value;

  static Operand lit(Word v) { return {OperandKind::Literal, std::move(v)}; }
  static Operand dir(std::uint64_t a) { return {OperandKind::Direct, Word(a)}; }
  static Operand ind(std::uint64_t a) { return {OperandKind::Indirect, Word(a)}; }

  friend bool operator==(const Operand&, const Operand&) = default;
};

/// One MRAM instruction. Operands are ordered dst, src1, src2 for data
/// instructions; JZ/JNZ carry their tested operand as the single operand.
/// Arity is not enforced by construction; validate() reports mismatches.
struct Instruction {
  Opcode op = Opcode::HALT;
  std::vector<Operand> operands;
  std::optional<std::size_t> target;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// An instruction sequence plus optional label names. Equality compares
/// instructions only; labels are presentation.
struct Program {
  std::vector<Instruction> instructions;
  std::map<std::string, std::size_t> labels;

  std::size_t size() const { return instructions.size(); }
  friend bool operator==(const Program& a, const Program& b) {
    return a.instructions == b.instructions;
  }
};

struct Defect {
  std::size_t index;
  std::string message;
};

/// Empty iff every instruction has the right arity, every jump lands inside
/// the program, and no literal is used as a destination.
std::vector<Defect> validate(const Program& program);

enum class CostModel { Unit, Log };

/// Cost of one executed instruction. `values` are the operand values read
/// plus any written result, `addresses` the effective memory addresses used.
std::uint64_t instruction_cost(const Instruction& instr, std::span<const Word> values,
                               std::span<const std::uint64_t> addresses, CostModel model);

/// Same accounting from pre-computed bit lengths; the vm's hot path.
std::uint64_t log_cost_from_bits(std::span<const std::uint64_t> value_bits,
                                 std::span<const std::uint64_t> addresses);

std::uint64_t address_bitlen(std::uint64_t a);

/// Incremental program construction with symbolic jump labels.
class ProgramBuilder {
 public:
  std::size_t emit(Opcode op, std::vector<Operand> operands = {});
  std::size_t jump(Opcode op, std::vector<Operand> operands, std::string label);
  void label(std::string name);
  std::size_t size() const { return program_.instructions.size(); }

  /// Resolves label references; throws PreconditionError on undefined labels
  /// or if the result fails validate().
  Program finish() &&;

 private:
  Program program_;
  std::vector<std::pair<std::size_t, std::string>> fixups_;
};

}  // namespace mram
