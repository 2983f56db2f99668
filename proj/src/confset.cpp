#include "mram/confset.hpp"

namespace mram::confset {

Word accept_mask(const ConfigSetCodec& codec, const Machine& m) {
  Word mask;
  const std::uint64_t per_state = codec.space() * codec.g() * codec.block();
  for (int q = 0; q < m.num_states(); ++q)
    if (m.accepting(q)) mask |= blockmask(static_cast<std::uint64_t>(q) * per_state, per_state);
  return mask;
}

std::vector<StepRule> step_rules(const ConfigSetCodec& codec, const Machine& m) {
  std::vector<StepRule> rules;
  const std::uint64_t S = codec.space();
  const std::uint64_t g = codec.g();
  const auto& delta = m.transitions();
  for (std::size_t ti = 0; ti < delta.size(); ++ti) {
    const auto& t = delta[ti];
    const auto q = static_cast<std::uint64_t>(t.from);
    const auto q2 = static_cast<std::uint64_t>(t.to);
    const auto a = static_cast<std::uint64_t>(t.read);
    const auto b = static_cast<std::uint64_t>(t.write);
    for (std::uint64_t h = 0; h < S; ++h) {
      const std::uint64_t from = codec.base(q, h, a);
      if (t.move == ndtm::Move::Stay) {
        StepRule r;
        r.mask = blockmask(from, codec.block());
        r.shift = static_cast<std::int64_t>(codec.base(q2, h, b)) - static_cast<std::int64_t>(from);
        r.origin = {ti, h, std::nullopt};
        r.block_base = from;
        rules.push_back(std::move(r));
        continue;
      }
      if (t.move == ndtm::Move::Left && h == 0) continue;
      if (t.move == ndtm::Move::Right && h + 1 >= S) continue;
      const std::uint64_t h2 = t.move == ndtm::Move::Left ? h - 1 : h + 1;
      // Cell h2 sits in the rest digits at position p; after the move cell h
      // takes that same position, so only digit p changes.
      const std::uint64_t p = std::min(h, h2);
      for (std::uint64_t a2 = 0; a2 < g; ++a2) {
        StepRule r;
        r.mask = g >= 2 ? shl(digitmask(g, p, a2, S - 1), from) : blockmask(from, codec.block());
        r.shift = static_cast<std::int64_t>(codec.base(q2, h2, a2)) -
                  static_cast<std::int64_t>(from) +
                  (static_cast<std::int64_t>(b) - static_cast<std::int64_t>(a2)) *
                      static_cast<std::int64_t>(codec.pow_g(p));
        r.origin = {ti, h, static_cast<int>(a2)};
        r.block_base = from;
        r.digit_position = p;
        r.digit = a2;
        rules.push_back(std::move(r));
      }
    }
  }
  return rules;
}

Word apply_rules(const Word& reached, std::span<const StepRule> rules) {
  Word out;
  for (const StepRule& r : rules) {
    Word sel = reached & r.mask;
    if (sel.is_zero()) continue;
    out |= r.shift >= 0 ? shl(sel, static_cast<std::uint64_t>(r.shift))
                        : shr(sel, static_cast<std::uint64_t>(-r.shift));
  }
  return out;
}

Word step_set(const Word& reached, std::span<const StepRule> rules, std::uint64_t universe) {
  Word next = reached | apply_rules(reached, rules);
  if (next.bitlen() > universe && !next.is_zero()) next &= blockmask(0, universe);
  return next;
}

ReachResult reachable_accepts(const ConfigSetCodec& codec, const Machine& m,
                              const std::vector<int>& input, Bounds bounds) {
  const auto start = ndtm::initial_config(m, input, bounds.space);
  const Word accept = accept_mask(codec, m);
  const auto rules = step_rules(codec, m);

  ReachResult res;
  Word reached = Word::power_of_two(codec.index(start));
  if (!(reached & accept).is_zero()) {
    res.accepted = true;
    return res;
  }
  for (std::uint64_t t = 0; t < bounds.time; ++t) {
    Word next = step_set(reached, rules, codec.universe());
    ++res.iterations;
    if (!(next & accept).is_zero()) {
      res.accepted = true;
      return res;
    }
    if (next == reached) break;
    reached = std::move(next);
  }
  return res;
}

}  // namespace mram::confset
