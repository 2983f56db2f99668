#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mram/isa.hpp"
#include "mram/ndtm.hpp"

namespace mram::problems {

/// CNF formula; literal v > 0 is variable v, -v its negation (1-based).
struct CnfFormula {
  std::uint32_t num_vars = 0;
  std::vector<std::vector<int>> clauses;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

struct DimacsDiagnostic {
  std::size_t line;
  std::string message;
};

struct DimacsResult {
  std::optional<CnfFormula> formula;
  std::vector<DimacsDiagnostic> diagnostics;
};

DimacsResult parse_dimacs(std::string_view text);
std::string to_dimacs(const CnfFormula& f);

inline constexpr std::uint32_t kSatOracleMaxVars = 20;

struct SatResult {
  std::optional<std::vector<bool>> assignment;  // index i holds variable i+1
  std::uint64_t tested = 0;
};

bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment);

/// Tries all assignments in lexicographic order (x1 most significant,
/// false before true). Throws PreconditionError above kSatOracleMaxVars.
SatResult sat_oracle(const CnfFormula& f);

struct GeneratedMachine {
  ndtm::NdtmSpec spec;
  ndtm::Bounds bounds;
};

/// Guess-and-verify machine: writes a nondeterministic assignment into cells
/// 0..n-1, then sweeps the tape once per clause, alternating direction,
/// remembering in its state whether the clause is satisfied yet. A failed
/// clause does not reject at once: the branch finishes the remaining sweeps
/// and rejects at the end, so every branch runs exactly T steps.
/// S = num_vars, T = n + n * clauses, |Q| <= n + 3 * n * clauses + 2.
GeneratedMachine cnf_to_ndtm(const CnfFormula& f);

/// Deterministic generator shared by sweeps and the scaling runs. Draws are
/// taken modulo the range so sequences are identical on every platform.
class FormulaGenerator {
 public:
  explicit FormulaGenerator(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }

  CnfFormula random(std::uint32_t num_vars, std::size_t clauses, std::size_t literals_per_clause);
  /// num_vars in [1, max_vars], clause count in [1, max_clauses], clause
  /// length in [1, max_literals].
  CnfFormula random_small(std::uint32_t max_vars, std::size_t max_clauses,
                          std::size_t max_literals);

 private:
  std::mt19937_64 rng_;
};

struct SortProgram {
  Program program;
  std::uint64_t n = 0;
  std::uint64_t max_key = 0;
  std::uint64_t table_base = 0;
  std::uint64_t output_base = 0;
};

/// Documented constants of the sort's unit-cost bound
/// executed <= c1 * n + c2 * max_key + c3.
inline constexpr std::uint64_t kSortC1 = 6;
inline constexpr std::uint64_t kSortC2 = 4;
inline constexpr std::uint64_t kSortC3 = 7;

/// Counting sort for exactly n keys read from cells 2..n+1. Counts land in a
/// table at table_base + k; the sorted keys are written to cells
/// output_base .. output_base + n - 1. A key above max_key makes the program
/// fault (division by zero) instead of halting.
SortProgram direct_sort_program(std::uint64_t n, std::uint64_t max_key);

}  // namespace mram::problems
