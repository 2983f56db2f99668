#include "mram/transpile.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace mram::transpile {

namespace {

Operand D(std::uint64_t a) { return Operand::dir(a); }
Operand I(std::uint64_t a) { return Operand::ind(a); }
Operand L(std::uint64_t v) { return Operand::lit(Word(v)); }

/// Emits dst := replicate(pattern, width, count) with the same doubling
/// recurrence as mram::replicate. `pattern` must not name dst or tmp.
void emit_replicate(ProgramBuilder& b, std::uint64_t dst, const Operand& pattern,
                    std::uint64_t width, std::uint64_t count, std::uint64_t tmp) {
  if (count == 0) {
    b.emit(Opcode::LOAD, {D(dst), L(0)});
    return;
  }
  b.emit(Opcode::LOAD, {D(dst), pattern});
  std::uint64_t k = 1;
  for (int bit = std::bit_width(count) - 2; bit >= 0; --bit) {
    b.emit(Opcode::SHL, {D(tmp), D(dst), L(k * width)});
    b.emit(Opcode::OR, {D(dst), D(dst), D(tmp)});
    k *= 2;
    if ((count >> bit) & 1U) {
      b.emit(Opcode::SHL, {D(dst), D(dst), L(width)});
      b.emit(Opcode::OR, {D(dst), D(dst), pattern});
      k += 1;
    }
  }
}

void emit_ones(ProgramBuilder& b, std::uint64_t dst, std::uint64_t length, std::uint64_t tmp) {
  emit_replicate(b, dst, L(1), 1, length, tmp);
}

}  // namespace

nlohmann::json LayoutMap::to_json() const {
  return {{"output", output},
          {"input_index", input_index},
          {"universe_bits", universe_bits},
          {"current_set", current_set},
          {"accept_mask", accept_mask},
          {"rule_table_base", rule_table_base},
          {"rules", rules},
          {"scratch_base", scratch_base}};
}

TranspileArtifact emit(const ConfigSetCodec& codec, const Machine& m, Bounds bounds,
                       EmitOptions options) {
  if (codec.space() != bounds.space)
    throw PreconditionError("codec space does not match bounds");
  if (codec.universe() > options.bit_budget)
    throw SizingError("configuration universe of " + std::to_string(codec.universe()) +
                      " bits exceeds the bit budget of " + std::to_string(options.bit_budget));

  const auto rules = confset::step_rules(codec, m);
  const std::uint64_t S = codec.space();
  const std::uint64_t g = codec.g();
  const std::uint64_t N = codec.universe();

  TranspileArtifact art;
  LayoutMap& lay = art.layout;
  lay.rules = rules.size();
  const std::uint64_t acc = lay.scratch_base;
  const std::uint64_t tmp = lay.scratch_base + 1;
  const std::uint64_t pat = lay.scratch_base + 2;
  const std::uint64_t block_ones = lay.scratch_base + 3;

  ProgramBuilder b;

  // Masks, built with shifts, ORs and the doubling scheme only.
  auto whole_block = [g](const confset::StepRule& r) { return !r.digit_position || g < 2; };
  if (std::any_of(rules.begin(), rules.end(), whole_block))
    emit_ones(b, block_ones, codec.block(), tmp);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& r = rules[i];
    const std::uint64_t cell = lay.rule_table_base + lay.rule_stride * i;
    if (whole_block(r)) {
      b.emit(Opcode::SHL, {D(cell), D(block_ones), L(r.block_base)});
    } else {
      const std::uint64_t p = *r.digit_position;
      const std::uint64_t run = codec.pow_g(p);
      emit_ones(b, pat, run, tmp);
      b.emit(Opcode::SHL, {D(pat), D(pat), L(r.digit * run)});
      emit_replicate(b, acc, D(pat), run * g, codec.pow_g(S - 2 - p), tmp);
      b.emit(Opcode::SHL, {D(cell), D(acc), L(r.block_base)});
    }
    const auto magnitude = static_cast<std::uint64_t>(r.shift < 0 ? -r.shift : r.shift);
    b.emit(Opcode::LOAD, {D(cell + 1), L(magnitude)});
    b.emit(Opcode::LOAD, {D(cell + 2), L(r.shift >= 0 ? 1 : 0)});
  }

  const std::uint64_t per_state = S * g * codec.block();
  emit_ones(b, tmp, per_state, acc);
  b.emit(Opcode::LOAD, {D(lay.accept_mask), L(0)});
  for (int q = 0; q < m.num_states(); ++q) {
    if (!m.accepting(q)) continue;
    b.emit(Opcode::SHL, {D(acc), D(tmp), L(static_cast<std::uint64_t>(q) * per_state)});
    b.emit(Opcode::OR, {D(lay.accept_mask), D(lay.accept_mask), D(acc)});
  }
  emit_ones(b, lay.universe_mask, N, tmp);
  const std::uint64_t mask_build = b.size();

  // Initial singleton and the zero-step acceptance test.
  b.emit(Opcode::LOAD, {D(lay.universe_bits), L(N)});
  b.emit(Opcode::SHL, {D(lay.current_set), L(1), D(lay.input_index)});
  b.emit(Opcode::AND, {D(lay.temp), D(lay.current_set), D(lay.accept_mask)});
  b.jump(Opcode::JNZ, {D(lay.temp)}, "accept");
  b.emit(Opcode::LOAD, {D(lay.iterations_left), L(bounds.time)});
  b.jump(Opcode::JZ, {D(lay.iterations_left)}, "reject");
  const std::uint64_t prologue = b.size();

  b.label("outer");
  b.emit(Opcode::LOAD, {D(lay.next_set), D(lay.current_set)});
  if (!rules.empty()) {
    b.emit(Opcode::LOAD, {D(lay.mask_ptr), L(lay.rule_table_base)});
    b.emit(Opcode::LOAD, {D(lay.shift_ptr), L(lay.rule_table_base + 1)});
    b.emit(Opcode::LOAD, {D(lay.dir_ptr), L(lay.rule_table_base + 2)});
    b.emit(Opcode::LOAD, {D(lay.rules_left), L(rules.size())});
    b.label("rule");
    b.emit(Opcode::AND, {D(lay.temp), D(lay.current_set), I(lay.mask_ptr)});
    b.jump(Opcode::JZ, {I(lay.dir_ptr)}, "shift_right");
    b.emit(Opcode::SHL, {D(lay.temp), D(lay.temp), I(lay.shift_ptr)});
    b.jump(Opcode::JUMP, {}, "merge");
    b.label("shift_right");
    b.emit(Opcode::SHR, {D(lay.temp), D(lay.temp), I(lay.shift_ptr)});
    b.label("merge");
    b.emit(Opcode::OR, {D(lay.next_set), D(lay.next_set), D(lay.temp)});
    b.emit(Opcode::ADD, {D(lay.mask_ptr), D(lay.mask_ptr), L(lay.rule_stride)});
    b.emit(Opcode::ADD, {D(lay.shift_ptr), D(lay.shift_ptr), L(lay.rule_stride)});
    b.emit(Opcode::ADD, {D(lay.dir_ptr), D(lay.dir_ptr), L(lay.rule_stride)});
    b.emit(Opcode::SUB, {D(lay.rules_left), D(lay.rules_left), L(1)});
    b.jump(Opcode::JNZ, {D(lay.rules_left)}, "rule");
  }
  b.emit(Opcode::AND, {D(lay.next_set), D(lay.next_set), D(lay.universe_mask)});
  b.emit(Opcode::AND, {D(lay.temp), D(lay.next_set), D(lay.accept_mask)});
  b.jump(Opcode::JNZ, {D(lay.temp)}, "accept");
  b.emit(Opcode::XOR, {D(lay.temp), D(lay.next_set), D(lay.current_set)});
  b.jump(Opcode::JZ, {D(lay.temp)}, "reject");
  b.emit(Opcode::LOAD, {D(lay.current_set), D(lay.next_set)});
  b.emit(Opcode::SUB, {D(lay.iterations_left), D(lay.iterations_left), L(1)});
  b.jump(Opcode::JNZ, {D(lay.iterations_left)}, "outer");
  b.label("reject");
  b.emit(Opcode::LOAD, {D(lay.output), L(0)});
  b.emit(Opcode::HALT);
  b.label("accept");
  b.emit(Opcode::LOAD, {D(lay.output), L(1)});
  b.emit(Opcode::HALT);

  art.program = std::move(b).finish();

  TranspileStats& st = art.stats;
  st.rule_count = rules.size();
  st.emitted_instructions = art.program.size();
  st.mask_build_instructions = mask_build;
  st.prologue_instructions = prologue;
  // Outer loop: 1 + 4 pointer loads + 8 tail; rule body: at most 10.
  st.per_iteration = rules.empty() ? 9 : 13 + 10 * rules.size();
  st.epilogue_instructions = 2;
  st.predicted_max_executed =
      st.prologue_instructions + bounds.time * st.per_iteration + st.epilogue_instructions;

  const double r = static_cast<double>(std::max<std::size_t>(rules.size(), 1));
  const double log2g = std::log2(static_cast<double>(g));
  const double log2S = std::log2(static_cast<double>(S));
  st.mask_build_bound = 64.0 * r * (static_cast<double>(S) * log2g + log2S + 4.0);
  st.per_iteration_bound = 8.0 * r;
  st.executed_bound =
      kBoundC * (st.mask_build_bound + static_cast<double>(bounds.time) * st.per_iteration_bound);
  return art;
}

MemoryImage seed_image(const ConfigSetCodec& codec, const Machine& m,
                       const std::vector<int>& input, Bounds bounds) {
  const auto start = ndtm::initial_config(m, input, bounds.space);
  return input_image({Word(codec.index(start))});
}

bool TripleReport::agree() const { return divergent().empty(); }

std::vector<std::string> TripleReport::divergent() const {
  std::vector<std::string> out;
  if (confset_accepted != oracle_accepted) out.push_back("confset");
  if (!vm_accepted || *vm_accepted != oracle_accepted) out.push_back("vm");
  return out;
}

TripleReport triple_check(const Machine& m, const std::vector<int>& input, Bounds bounds,
                          TripleCheckOptions options) {
  TripleReport rep;
  const auto oracle = ndtm::oracle_accepts(m, input, bounds);
  rep.oracle_accepted = oracle.accepted;
  rep.oracle_explored = oracle.explored;

  const ConfigSetCodec codec(m, bounds.space);
  rep.universe_bits = codec.universe();
  const auto reach = confset::reachable_accepts(codec, m, input, bounds);
  rep.confset_accepted = reach.accepted;
  rep.confset_iterations = reach.iterations;

  const auto art = emit(codec, m, bounds, {options.bit_budget});
  rep.stats = art.stats;
  // Total stored bits: the per-Word budget for every Word-sized cell of the layout.
  const std::uint64_t word_cells = art.layout.rule_table_base + art.layout.rules + 1;
  RunOptions ro{options.fuel, options.bit_budget * word_cells};
  const auto result = run(art.program, seed_image(codec, m, input, bounds), ro);
  rep.cost = result.report;
  if (result.fault) {
    rep.vm_fault = result.fault;
  } else {
    const Word& out = result.output();
    if (out == Word(0) || out == Word(1)) rep.vm_accepted = out == Word(1);
  }
  return rep;
}

nlohmann::json report_to_json(const TripleReport& r) {
  auto verdict = [](bool a) { return a ? "accept" : "reject"; };
  nlohmann::json j = {
      {"oracle", verdict(r.oracle_accepted)},
      {"oracle_explored", r.oracle_explored},
      {"confset", verdict(r.confset_accepted)},
      {"confset_iterations", r.confset_iterations},
      {"vm", r.vm_accepted ? nlohmann::json(verdict(*r.vm_accepted)) : nlohmann::json("fault")},
      {"agree", r.agree()},
      {"universe_bits", r.universe_bits},
      {"executed", r.cost.executed},
      {"unit_cost", r.cost.unit_cost},
      {"log_cost", r.cost.log_cost},
      {"max_cell_bits", r.cost.max_cell_bits},
      {"rules", r.stats.rule_count},
      {"executed_bound", r.stats.executed_bound},
  };
  if (r.vm_fault)
    j["vm_fault"] = std::string(fault_name(r.vm_fault->kind)) + ": " + r.vm_fault->message;
  if (!r.agree()) j["divergent"] = r.divergent();
  return j;
}

}  // namespace mram::transpile
