#include "doctest.h"

#include <cmath>
#include <set>

#include "mram/asm.hpp"
#include "mram/problems.hpp"
#include "mram/transpile.hpp"

using namespace mram;
using namespace mram::ndtm;
using namespace mram::transpile;

namespace {

std::vector<std::vector<int>> words_up_to(const Machine& m, std::size_t len) {
  std::vector<int> sigma;
  for (const auto& a : m.spec().input_alphabet) sigma.push_back(*m.symbol_index(a));
  std::vector<std::vector<int>> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].size() < len)
      for (int a : sigma) {
        auto w = out[i];
        w.push_back(a);
        out.push_back(w);
      }
  return out;
}

RunResult run_emitted(const Machine& m, const std::vector<int>& input, Bounds b) {
  ConfigSetCodec codec(m, b.space);
  auto art = emit(codec, m, b);
  return run(art.program, seed_image(codec, m, input, b));
}

}  // namespace

TEST_CASE("emit examples") {
  Machine gb(corpus_machine("guess-bit"));
  auto r = run_emitted(gb, {}, {2, 2});
  REQUIRE(r.ok());
  CHECK(r.output() == Word(1));

  Machine ar(corpus_machine("always-reject"));
  r = run_emitted(ar, {}, {2, 4});
  REQUIRE(r.ok());
  CHECK(r.output() == Word(0));

  auto spec = corpus_machine("guess-bit");
  spec.accept = {"s"};
  spec.transitions.clear();
  Machine trivial(spec);
  ConfigSetCodec codec(trivial, 1);
  auto art = emit(codec, trivial, {1, 0});
  auto t = run(art.program, seed_image(codec, trivial, {}, {1, 0}));
  REQUIRE(t.ok());
  CHECK(t.output() == Word(1));
  CHECK(t.report.executed <= art.stats.prologue_instructions + art.stats.epilogue_instructions);
}

TEST_CASE("triple_check examples") {
  Machine gb(corpus_machine("guess-bit"));
  auto r = triple_check(gb, {}, {2, 2});
  CHECK(r.agree());
  CHECK(r.oracle_accepted);
  CHECK(r.confset_accepted);
  CHECK(r.vm_accepted == true);

  Machine par(corpus_machine("parity"));
  auto acc = triple_check(par, par.encode_input({"1", "1", "1"}), {4, 4});
  CHECK(acc.agree());
  CHECK(acc.oracle_accepted);
  auto rej = triple_check(par, par.encode_input({"1", "1"}), {4, 3});
  CHECK(rej.agree());
  CHECK_FALSE(rej.oracle_accepted);
  CHECK(rej.divergent().empty());

  TripleReport fake = acc;
  fake.vm_accepted = false;
  CHECK_FALSE(fake.agree());
  CHECK(fake.divergent() == std::vector<std::string>{"vm"});
  fake.confset_accepted = false;
  CHECK(fake.divergent() == std::vector<std::string>{"confset", "vm"});
  fake = acc;
  fake.vm_accepted.reset();
  fake.vm_fault = Fault{FaultKind::FuelExhausted, 0, "x"};
  CHECK_FALSE(fake.agree());
  auto j = report_to_json(fake);
  CHECK(j["divergent"] == nlohmann::json::array({"vm"}));
}

TEST_CASE("three levels agree exhaustively on the corpus") {
  for (const auto& name : corpus_names()) {
    Machine m(corpus_machine(name));
    for (std::uint64_t s = 1; s <= 3; ++s)
      for (const auto& w : words_up_to(m, s))
        for (std::uint64_t t = 0; t <= 8; ++t) {
          auto r = triple_check(m, w, {s, t});
          INFO(name, " S=", s, " T=", t, " |w|=", w.size());
          CHECK(r.agree());
          CHECK(r.cost.executed <= r.stats.executed_bound);
          CHECK(r.cost.executed <= r.stats.predicted_max_executed);
        }
  }
}

TEST_CASE("bound constants and program shape") {
  problems::FormulaGenerator gen(17);
  std::vector<std::pair<Machine, Bounds>> cases;
  for (const auto& name : corpus_names())
    for (std::uint64_t s = 1; s <= 3; ++s) cases.emplace_back(Machine(corpus_machine(name)), Bounds{s, 8});
  for (int i = 0; i < 10; ++i) {
    auto gm = problems::cnf_to_ndtm(gen.random_small(3, 3, 3));
    cases.emplace_back(Machine(gm.spec), gm.bounds);
  }
  for (const auto& [m, b] : cases) {
    ConfigSetCodec codec(m, b.space);
    auto art = emit(codec, m, b);
    const double r = static_cast<double>(std::max<std::uint64_t>(art.stats.rule_count, 1));
    const double B = 64 * r *
                     (static_cast<double>(b.space) * std::log2(static_cast<double>(codec.g())) +
                      std::log2(static_cast<double>(b.space)) + 4);
    CHECK(kBoundC <= 4.0);
    CHECK(static_cast<double>(art.stats.mask_build_instructions) <= B);
    CHECK(static_cast<double>(art.stats.per_iteration) <= kBoundC * 8 * r);
    CHECK(art.stats.executed_bound == doctest::Approx(kBoundC * (B + static_cast<double>(b.time) * 8 * r)));
    CHECK(static_cast<double>(art.stats.predicted_max_executed) <= art.stats.executed_bound);

    std::set<Opcode> used;
    for (const auto& in : art.program.instructions) used.insert(in.op);
    CHECK_FALSE(used.count(Opcode::DIV));
    for (std::size_t pc = 0; pc < art.stats.mask_build_instructions; ++pc) {
      auto op = art.program.instructions[pc].op;
      CHECK((op == Opcode::LOAD || op == Opcode::ADD || op == Opcode::MUL || op == Opcode::SHL ||
             op == Opcode::AND || op == Opcode::OR));
    }
    CHECK(validate(art.program).empty());
  }
}

TEST_CASE("emitted programs never write cell 1 or the input index") {
  for (const auto& name : corpus_names()) {
    Machine m(corpus_machine(name));
    for (std::uint64_t s = 1; s <= 3; ++s)
      for (const auto& w : words_up_to(m, s)) {
        ConfigSetCodec codec(m, s);
        Bounds b{s, 6};
        auto art = emit(codec, m, b);
        auto image = seed_image(codec, m, w, b);
        CHECK(image.at(cells::kInputLength) == Word(1));
        auto t = trace(art.program, image);
        REQUIRE(t.result.ok());
        for (const auto& rec : t.records)
          if (rec.written_bits) {
            REQUIRE(!rec.addresses.empty());
            auto dst = rec.addresses.back();
            CHECK(dst != art.layout.input_length);
            CHECK(dst != art.layout.input_index);
          }
        CHECK(t.result.state.memory.get(1) == Word(1));
      }
  }
}

TEST_CASE("layout regions are disjoint") {
  Machine par(corpus_machine("parity"));
  ConfigSetCodec codec(par, 3);
  auto art = emit(codec, par, {3, 4});
  const auto& l = art.layout;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> regions = {
      {l.output, 1},        {l.input_length, 1},  {l.input_index, 1},    {l.universe_bits, 1},
      {l.temp, 1},          {l.iterations_left, 1}, {l.mask_ptr, 1},     {l.shift_ptr, 1},
      {l.dir_ptr, 1},       {l.rules_left, 1},    {l.next_set, 1},       {l.universe_mask, 1},
      {l.current_set, 1},   {l.accept_mask, 1},   {l.scratch_base, l.scratch_size},
      {l.rule_table_base, l.rules * l.rule_stride}};
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      auto [a, la] = regions[i];
      auto [b, lb] = regions[j];
      CHECK((a + la <= b || b + lb <= a));
    }
  CHECK(l.rules == art.stats.rule_count);
  auto j = l.to_json();
  for (const char* key : {"output", "input_index", "universe_bits", "current_set", "accept_mask",
                          "rule_table_base", "rules", "scratch_base"})
    CHECK(j.contains(key));
  CHECK(j.size() == 8);
}

TEST_CASE("sizing refusal") {
  Machine par(corpus_machine("parity"));
  ConfigSetCodec codec(par, 4);
  CHECK_THROWS_AS(emit(codec, par, {4, 4}, {.bit_budget = 100}), SizingError);
  CHECK_THROWS_AS(emit(codec, par, {3, 4}), PreconditionError);
}

TEST_CASE("log cost grows with the universe") {
  Machine par(corpus_machine("parity"));
  for (std::uint64_t s = 2; s <= 5; ++s) {
    std::vector<int> w(s - 1, *par.symbol_index("1"));
    auto r = triple_check(par, w, {s, s});
    REQUIRE(r.agree());
    if (r.universe_bits >= 64) CHECK(r.cost.log_cost * 2 >= r.universe_bits);
    CHECK(r.cost.log_cost > r.cost.unit_cost);
  }
}
