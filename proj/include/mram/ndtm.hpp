#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mram/word.hpp"

namespace mram::ndtm {

enum class Move { Left, Right, Stay };

/// Thrown when a spec is structurally unusable or an input does not fit.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TransitionSpec {
  std::string from;
  std::string read;
  std::string to;
  std::string write;
  Move move = Move::Stay;

  friend bool operator==(const TransitionSpec&, const TransitionSpec&) = default;
};

/// A single-tape nondeterministic Turing machine as written in its JSON file.
struct NdtmSpec {
  std::vector<std::string> states;
  std::vector<std::string> tape_alphabet;
  std::string blank;
  std::vector<std::string> input_alphabet;
  std::vector<TransitionSpec> transitions;
  std::string start;
  std::vector<std::string> accept;
  std::vector<std::string> reject;

  friend bool operator==(const NdtmSpec&, const NdtmSpec&) = default;
};

NdtmSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const NdtmSpec& spec);
NdtmSpec load_spec(const std::string& path);

/// Canonical corpus: "guess-bit", "always-reject", "parity".
NdtmSpec corpus_machine(std::string_view name);
std::vector<std::string> corpus_names();

/// Itemized defects; empty iff the spec is well formed.
std::vector<std::string> validate_spec(const NdtmSpec& spec);

struct Bounds {
  std::uint64_t space = 1;  // tape cells S
  std::uint64_t time = 0;   // steps T
};

/// Numbered transition: states and symbols replaced by their digits.
struct Transition {
  int from;
  int read;
  int to;
  int write;
  Move move;
};

/// A validated spec with the fixed numbering used by every index computation:
/// the start state is state 0 and the blank is symbol 0; the remaining states
/// and symbols follow in file order.
class Machine {
 public:
  /// Throws SpecError listing the defects when validate_spec is non-empty.
  explicit Machine(NdtmSpec spec);

  const NdtmSpec& spec() const { return spec_; }
  int num_states() const { return static_cast<int>(state_names_.size()); }
  int num_symbols() const { return static_cast<int>(symbol_names_.size()); }
  const std::vector<Transition>& transitions() const { return delta_; }
  bool accepting(int q) const { return accepting_[static_cast<std::size_t>(q)]; }
  bool rejecting(int q) const { return rejecting_[static_cast<std::size_t>(q)]; }
  bool halting(int q) const { return accepting(q) || rejecting(q); }

  const std::string& state_name(int q) const { return state_names_[static_cast<std::size_t>(q)]; }
  const std::string& symbol_name(int a) const { return symbol_names_[static_cast<std::size_t>(a)]; }
  std::optional<int> state_index(std::string_view name) const;
  std::optional<int> symbol_index(std::string_view name) const;

  /// Maps input symbol names to digits; throws SpecError on symbols outside
  /// the input alphabet.
  std::vector<int> encode_input(const std::vector<std::string>& symbols) const;

 private:
  NdtmSpec spec_;
  std::vector<std::string> state_names_;
  std::vector<std::string> symbol_names_;
  std::vector<Transition> delta_;
  std::vector<bool> accepting_;
  std::vector<bool> rejecting_;
  std::vector<bool> input_symbol_;
};

/// Splits a command-line word into symbols: comma-separated when it contains a
/// comma, otherwise one symbol per character.
std::vector<std::string> split_word(std::string_view word);

struct Configuration {
  int state = 0;
  std::size_t head = 0;
  std::vector<int> tape;

  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

std::string describe(const Machine& m, const Configuration& c);

Configuration initial_config(const Machine& m, const std::vector<int>& input, std::uint64_t space);

/// One layer of the computation tree. Branches whose head would leave the
/// tape die; halting configurations have no successors. Sorted, duplicate-free.
std::vector<Configuration> successors(const Machine& m, const Configuration& c);

struct OracleResult {
  bool accepted = false;
  std::vector<Configuration> witness;  // shortest accepting path, initial first
  std::uint64_t explored = 0;          // distinct configurations discovered
};

/// Exhaustive breadth-first search over at most `bounds.time` steps.
OracleResult oracle_accepts(const Machine& m, const std::vector<int>& input, Bounds bounds);

/// Bijection between configurations and bit positions [0, N) of one Word.
class ConfigSetCodec {
 public:
  ConfigSetCodec(const Machine& m, std::uint64_t space);

  std::uint64_t g() const { return g_; }
  std::uint64_t states() const { return q_; }
  std::uint64_t space() const { return s_; }
  std::uint64_t universe() const { return n_; }
  /// g^(S-1): configurations sharing one (state, head, scanned symbol) triple.
  std::uint64_t block() const { return block_; }
  std::uint64_t pow_g(std::uint64_t e) const { return pow_[e]; }

  std::uint64_t base(std::uint64_t q, std::uint64_t head, std::uint64_t symbol) const {
    return ((q * s_ + head) * g_ + symbol) * block_;
  }

  std::uint64_t index(const Configuration& c) const;
  Configuration unindex(std::uint64_t i) const;

  nlohmann::json to_json(const Machine& m) const;

 private:
  std::uint64_t g_, q_, s_, n_, block_;
  std::vector<std::uint64_t> pow_;
};

}  // namespace mram::ndtm
