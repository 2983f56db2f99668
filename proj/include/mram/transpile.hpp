#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "mram/confset.hpp"
#include "mram/isa.hpp"
#include "mram/ndtm.hpp"
#include "mram/vm.hpp"

namespace mram::transpile {

using ndtm::Bounds;
using ndtm::ConfigSetCodec;
using ndtm::Machine;

/// Raised when a machine's configuration universe exceeds the bit budget.
class SizingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed cell assignments of emitted programs. The caller seeds cell 1 with 1
/// and cell 2 (`input_index`) with the initial configuration's index; every
/// other cell starts at zero.
struct LayoutMap {
  std::uint64_t output = cells::kOutput;
  std::uint64_t input_length = cells::kInputLength;
  std::uint64_t input_index = cells::kInputBase;
  std::uint64_t universe_bits = 3;
  // Loop registers in the reserved scratch cells 8..15.
  std::uint64_t temp = 8;
  std::uint64_t iterations_left = 9;
  std::uint64_t mask_ptr = 10;
  std::uint64_t shift_ptr = 11;
  std::uint64_t dir_ptr = 12;
  std::uint64_t rules_left = 13;
  std::uint64_t next_set = 14;
  std::uint64_t universe_mask = 15;
  std::uint64_t current_set = 16;
  std::uint64_t accept_mask = 17;
  std::uint64_t scratch_base = 18;  // mask-build scratch, 4 cells
  std::uint64_t scratch_size = 4;
  std::uint64_t rule_table_base = 24;  // per rule: mask, |shift|, left-shift flag
  std::uint64_t rule_stride = 3;
  std::uint64_t rules = 0;

  nlohmann::json to_json() const;
};

/// Constants of the executed-instruction bound
///   executed <= C * (B + T * K),  K = 8 * rules,
///   B = 64 * rules * (S log2 g + log2 S + 4).
/// rules is taken as at least 1 so a machine without transitions still has a
/// positive budget.
inline constexpr double kBoundC = 4.0;

struct TranspileStats {
  std::uint64_t rule_count = 0;
  std::uint64_t emitted_instructions = 0;
  std::uint64_t mask_build_instructions = 0;   // executed once, straight-line
  std::uint64_t prologue_instructions = 0;     // everything before the first iteration
  std::uint64_t per_iteration = 0;             // worst case per outer iteration
  std::uint64_t epilogue_instructions = 2;
  double mask_build_bound = 0;                 // B
  double per_iteration_bound = 0;              // K
  double executed_bound = 0;                   // C * (B + T * K)
  /// Exact worst-case executed count: prologue + T * per_iteration + epilogue.
  std::uint64_t predicted_max_executed = 0;
};

struct TranspileArtifact {
  Program program;
  LayoutMap layout;
  TranspileStats stats;
};

struct EmitOptions {
  std::uint64_t bit_budget = kDefaultBitBudget;
};

/// Compiles the configuration-set simulation of `m` under `bounds` into an
/// MRAM program. Throws SizingError when the universe exceeds the budget.
TranspileArtifact emit(const ConfigSetCodec& codec, const Machine& m, Bounds bounds,
                       EmitOptions options = {});

/// Input image for an emitted program: cell 1 = 1, cell 2 = initial index.
MemoryImage seed_image(const ConfigSetCodec& codec, const Machine& m,
                       const std::vector<int>& input, Bounds bounds);

struct TripleCheckOptions {
  std::uint64_t fuel = kDefaultFuel;
  std::uint64_t bit_budget = kDefaultBitBudget;  // per Word
};

struct TripleReport {
  bool oracle_accepted = false;
  std::uint64_t oracle_explored = 0;
  bool confset_accepted = false;
  std::uint64_t confset_iterations = 0;
  std::optional<bool> vm_accepted;  // empty when the vm faulted
  std::optional<Fault> vm_fault;
  CostReport cost;
  TranspileStats stats;
  std::uint64_t universe_bits = 0;

  bool agree() const;
  /// Names of the levels that disagree with the oracle ("confset", "vm").
  std::vector<std::string> divergent() const;
};

/// Runs the brute-force oracle, the host configuration-set simulation and the
/// transpiled program, and reports all three verdicts with vm costs.
TripleReport triple_check(const Machine& m, const std::vector<int>& input, Bounds bounds,
                          TripleCheckOptions options = {});

nlohmann::json report_to_json(const TripleReport& r);

}  // namespace mram::transpile
