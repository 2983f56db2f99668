#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mram/isa.hpp"
#include "mram/word.hpp"

namespace mram {

/// Memory-mapped I/O convention shared by every program in this repository.
namespace cells {
inline constexpr std::uint64_t kOutput = 0;
inline constexpr std::uint64_t kInputLength = 1;
inline constexpr std::uint64_t kInputBase = 2;
inline constexpr std::uint64_t kScratchBase = 8;
inline constexpr std::uint64_t kScratchEnd = 16;  // exclusive
}  // namespace cells

inline constexpr std::uint64_t kDefaultFuel = 100'000'000;
inline constexpr std::uint64_t kDefaultBitBudget = std::uint64_t{1} << 27;
/// Hard ceiling on any single Word, applied even without a bit budget.
inline constexpr std::uint64_t kMaxWordBits = std::uint64_t{1} << 34;

using MemoryImage = std::map<std::uint64_t, Word>;

/// Sparse cell store: absent cells read as zero and zero is never stored.
class Memory {
 public:
  Memory() = default;
  explicit Memory(const MemoryImage& image);

  const Word& get(std::uint64_t address) const;
  void set(std::uint64_t address, Word value);

  /// Sum of bit lengths over all non-zero cells.
  std::uint64_t stored_bits() const { return stored_bits_; }
  std::uint64_t bits_at(std::uint64_t address) const;
  MemoryImage image() const;

  friend bool operator==(const Memory& a, const Memory& b) { return a.image() == b.image(); }

 private:
  static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 20;
  std::vector<Word> dense_;
  std::unordered_map<std::uint64_t, Word> sparse_;
  std::uint64_t stored_bits_ = 0;
};

struct MachineState {
  std::size_t pc = 0;
  Memory memory;
  bool halted = false;
  std::uint64_t executed = 0;
  std::uint64_t unit_cost = 0;
  std::uint64_t log_cost = 0;
};

struct CostReport {
  std::uint64_t executed = 0;
  std::uint64_t unit_cost = 0;
  std::uint64_t log_cost = 0;
  std::uint64_t max_cell_bits = 0;
  std::uint64_t cells_touched = 0;

  friend bool operator==(const CostReport&, const CostReport&) = default;
};

enum class FaultKind {
  DivisionByZero,
  PcOutOfRange,
  FuelExhausted,
  BitBudgetExceeded,
  AddressOutOfRange,
  InvalidProgram,
};

std::string_view fault_name(FaultKind kind);

struct Fault {
  FaultKind kind;
  std::size_t pc = 0;
  std::string message;
};

struct RunOptions {
  std::uint64_t fuel = kDefaultFuel;
  std::optional<std::uint64_t> bit_budget;
};

struct RunResult {
  MachineState state;
  CostReport report;
  std::optional<Fault> fault;

  bool ok() const { return !fault && state.halted; }
  const Word& output() const { return state.memory.get(cells::kOutput); }
};

/// One executed step. `addresses` lists resolved (effective) memory
/// addresses in operand order; pointer cells of indirect operands are charged
/// by the log cost model but not listed here.
struct TraceRecord {
  std::size_t pc;
  Opcode op;
  std::vector<std::uint64_t> addresses;
  std::optional<std::uint64_t> written_bits;
};

struct TraceResult {
  std::vector<TraceRecord> records;
  RunResult result;
};

/// Builds the conventional input image: cell 1 = item count, cells 2.. = items.
MemoryImage input_image(const std::vector<Word>& items);

/// Executes one MRAM program against a machine state. Construction decodes the
/// program once; the executor can then be stepped or run many times.
class Executor {
 public:
  explicit Executor(const Program& program, RunOptions options = {});

  /// Executes the instruction at state.pc. On a fault the state is left as it
  /// was before the instruction and the fault is returned.
  std::optional<Fault> step(MachineState& state, TraceRecord* record = nullptr);

  RunResult run(const MemoryImage& image);
  TraceResult trace(const MemoryImage& image);

 private:
  struct Slot {
    OperandKind kind;
    std::uint64_t address = 0;   // direct/indirect
    std::size_t literal = 0;     // index into literals_
    bool oversized = false;      // address does not fit 64 bits
  };
  struct Decoded {
    Opcode op;
    Slot slots[3];
    std::size_t arity = 0;
    std::size_t target = 0;
  };

  struct Tracker {
    std::uint64_t max_cell_bits = 0;
    std::vector<bool> small;
    std::unordered_map<std::uint64_t, bool> large;
    void touch(std::uint64_t address);
    std::uint64_t touched() const;
  };

  std::optional<Fault> step_impl(MachineState& state, TraceRecord* record, Tracker* tracker);
  RunResult execute(const MemoryImage& image, std::vector<TraceRecord>* records);

  std::vector<Decoded> code_;
  std::vector<Word> literals_;
  RunOptions options_;
  std::optional<Fault> invalid_;
};

RunResult run(const Program& program, const MemoryImage& image, RunOptions options = {});
TraceResult trace(const Program& program, const MemoryImage& image, RunOptions options = {});

}  // namespace mram
