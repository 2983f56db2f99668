#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mram/ndtm.hpp"
#include "mram/word.hpp"

namespace mram::confset {

using ndtm::Bounds;
using ndtm::ConfigSetCodec;
using ndtm::Machine;

/// Where a step rule came from: one transition applied with the head at
/// `head`, and (for L/R moves) the symbol found under the head after moving.
struct RuleOrigin {
  std::size_t transition;
  std::uint64_t head;
  std::optional<int> scanned_after;
};

/// Selects the configurations `mask` and translates their bit positions by
/// `shift` (negative means towards bit 0).
struct StepRule {
  Word mask;
  std::int64_t shift = 0;
  RuleOrigin origin;

  // Parameters the mask was built from: a run of `block` ones at `block_base`,
  // restricted (for L/R moves) to the rest-digit `digit` at `digit_position`.
  std::uint64_t block_base = 0;
  std::optional<std::uint64_t> digit_position;
  std::uint64_t digit = 0;
};

/// Ones exactly at the indices of configurations in an accepting state.
Word accept_mask(const ConfigSetCodec& codec, const Machine& m);

/// The mask-and-shift rules realizing one step of the machine on a set of
/// configurations. At most |transitions| * S * g rules.
std::vector<StepRule> step_rules(const ConfigSetCodec& codec, const Machine& m);

/// Union of R with the image of R under every rule, clipped to [0, universe).
Word step_set(const Word& reached, std::span<const StepRule> rules, std::uint64_t universe);

/// Image of R under the rules alone (no union with R, no clipping).
Word apply_rules(const Word& reached, std::span<const StepRule> rules);

struct ReachResult {
  bool accepted = false;
  std::uint64_t iterations = 0;
};

/// Iterates step_set from the initial singleton at most T times, stopping once
/// an accepting configuration is reached or the set stops growing.
ReachResult reachable_accepts(const ConfigSetCodec& codec, const Machine& m,
                              const std::vector<int>& input, Bounds bounds);

}  // namespace mram::confset
