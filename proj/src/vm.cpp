#include "mram/vm.hpp"

#include <algorithm>
#include <array>

namespace mram {

namespace {

const Word kZero;

}  // namespace

std::string_view fault_name(FaultKind kind) {
  switch (kind) {
    case FaultKind::DivisionByZero: return "division-by-zero";
    case FaultKind::PcOutOfRange: return "pc-out-of-range";
    case FaultKind::FuelExhausted: return "fuel-exhausted";
    case FaultKind::BitBudgetExceeded: return "bit-budget-exceeded";
    case FaultKind::AddressOutOfRange: return "address-out-of-range";
    case FaultKind::InvalidProgram: return "invalid-program";
  }
  return "unknown";
}

Memory::Memory(const MemoryImage& image) {
  for (const auto& [a, v] : image) set(a, v);
}

const Word& Memory::get(std::uint64_t address) const {
  if (address < kDenseLimit) return address < dense_.size() ? dense_[address] : kZero;
  auto it = sparse_.find(address);
  return it == sparse_.end() ? kZero : it->second;
}

std::uint64_t Memory::bits_at(std::uint64_t address) const {
  const Word& w = get(address);
  return w.is_zero() ? 0 : w.bitlen();
}

void Memory::set(std::uint64_t address, Word value) {
  stored_bits_ -= bits_at(address);
  if (!value.is_zero()) stored_bits_ += value.bitlen();
  if (address < kDenseLimit) {
    if (address >= dense_.size()) {
      if (value.is_zero()) return;
      dense_.resize(std::max<std::size_t>(address + 1, dense_.size() * 2));
    }
    dense_[address] = std::move(value);
    return;
  }
  if (value.is_zero())
    sparse_.erase(address);
  else
    sparse_[address] = std::move(value);
}

MemoryImage Memory::image() const {
  MemoryImage out;
  for (std::size_t a = 0; a < dense_.size(); ++a)
    if (!dense_[a].is_zero()) out.emplace(a, dense_[a]);
  for (const auto& [a, v] : sparse_) out.emplace(a, v);
  return out;
}

MemoryImage input_image(const std::vector<Word>& items) {
  MemoryImage image;
  if (!items.empty()) image.emplace(cells::kInputLength, Word(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i)
    if (!items[i].is_zero()) image.emplace(cells::kInputBase + i, items[i]);
  return image;
}

void Executor::Tracker::touch(std::uint64_t address) {
  if (address < (std::uint64_t{1} << 20)) {
    if (address >= small.size()) small.resize(std::max<std::size_t>(address + 1, small.size() * 2));
    small[address] = true;
  } else {
    large[address] = true;
  }
}

std::uint64_t Executor::Tracker::touched() const {
  return static_cast<std::uint64_t>(std::count(small.begin(), small.end(), true)) + large.size();
}

Executor::Executor(const Program& program, RunOptions options) : options_(options) {
  if (auto defects = validate(program); !defects.empty()) {
    invalid_ = Fault{FaultKind::InvalidProgram, defects[0].index, defects[0].message};
    return;
  }
  code_.reserve(program.size());
  for (const Instruction& ins : program.instructions) {
    Decoded d{};
    d.op = ins.op;
    d.arity = ins.operands.size();
    d.target = ins.target.value_or(0);
    for (std::size_t i = 0; i < ins.operands.size(); ++i) {
      const Operand& o = ins.operands[i];
      Slot& s = d.slots[i];
      s.kind = o.kind;
      if (o.kind == OperandKind::Literal) {
        s.literal = literals_.size();
        literals_.push_back(o.value);
      } else if (auto a = o.value.to_u64()) {
        s.address = *a;
      } else {
        s.oversized = true;
      }
    }
    code_.push_back(d);
  }
}

std::optional<Fault> Executor::step(MachineState& state, TraceRecord* record) {
  return step_impl(state, record, nullptr);
}

std::optional<Fault> Executor::step_impl(MachineState& state, TraceRecord* record,
                                         Tracker* tracker) {
  if (invalid_) return invalid_;
  const std::size_t pc = state.pc;
  auto fault = [pc](FaultKind k, std::string msg) { return Fault{k, pc, std::move(msg)}; };
  if (state.halted) return fault(FaultKind::InvalidProgram, "machine already halted");
  if (pc >= code_.size()) return fault(FaultKind::PcOutOfRange, "pc left the program without HALT");

  const Decoded& d = code_[pc];
  Memory& mem = state.memory;

  std::array<std::uint64_t, 6> addrs{};
  std::size_t n_addrs = 0;
  std::array<std::uint64_t, 4> bits{};
  std::size_t n_bits = 0;
  std::array<std::uint64_t, 3> effective{};
  std::size_t n_effective = 0;

  // Resolves an operand to the address it names (direct/indirect only).
  auto locate = [&](const Slot& s) -> std::optional<std::uint64_t> {
    if (s.oversized) return std::nullopt;
    if (s.kind == OperandKind::Direct) {
      addrs[n_addrs++] = s.address;
      return s.address;
    }
    addrs[n_addrs++] = s.address;
    auto eff = mem.get(s.address).to_u64();
    if (!eff) return std::nullopt;
    addrs[n_addrs++] = *eff;
    return eff;
  };
  auto read = [&](const Slot& s, const Word*& out) -> bool {
    if (s.kind == OperandKind::Literal) {
      out = &literals_[s.literal];
    } else {
      auto a = locate(s);
      if (!a) return false;
      effective[n_effective++] = *a;
      out = &mem.get(*a);
    }
    bits[n_bits++] = out->bitlen();
    return true;
  };

  const Word* x = nullptr;
  const Word* y = nullptr;
  std::optional<std::size_t> next_pc = pc + 1;
  std::optional<Word> result;
  std::uint64_t dst = 0;
  bool halt = false;

  switch (d.op) {
    case Opcode::HALT:
      halt = true;
      next_pc = pc;
      break;
    case Opcode::JUMP:
      next_pc = d.target;
      break;
    case Opcode::JZ:
    case Opcode::JNZ: {
      if (!read(d.slots[0], x)) return fault(FaultKind::AddressOutOfRange, "address exceeds 64 bits");
      bool zero = x->is_zero();
      if ((d.op == Opcode::JZ) == zero) next_pc = d.target;
      break;
    }
    default: {
      if (!read(d.slots[1], x)) return fault(FaultKind::AddressOutOfRange, "address exceeds 64 bits");
      if (d.arity == 3 && !read(d.slots[2], y))
        return fault(FaultKind::AddressOutOfRange, "address exceeds 64 bits");
      auto dst_addr = locate(d.slots[0]);
      if (!dst_addr) return fault(FaultKind::AddressOutOfRange, "address exceeds 64 bits");
      dst = *dst_addr;
      effective[n_effective++] = dst;

      const std::uint64_t ceiling =
          std::min(kMaxWordBits, options_.bit_budget.value_or(kMaxWordBits));
      auto too_big = [&](std::uint64_t predicted) { return predicted > ceiling; };
      switch (d.op) {
        case Opcode::LOAD: result = *x; break;
        case Opcode::ADD:
          if (too_big(std::max(x->bitlen(), y->bitlen()) + 1))
            return fault(FaultKind::BitBudgetExceeded, "ADD result too large");
          result = *x + *y;
          break;
        case Opcode::SUB: result = monus(*x, *y); break;
        case Opcode::MUL:
          if (!x->is_zero() && !y->is_zero() && too_big(x->bitlen() + y->bitlen()))
            return fault(FaultKind::BitBudgetExceeded, "MUL result too large");
          result = *x * *y;
          break;
        case Opcode::DIV:
          if (y->is_zero()) return fault(FaultKind::DivisionByZero, "DIV by zero");
          result = floor_div(*x, *y);
          break;
        case Opcode::AND: result = *x & *y; break;
        case Opcode::OR: result = *x | *y; break;
        case Opcode::XOR: result = *x ^ *y; break;
        case Opcode::SHL: {
          if (x->is_zero()) {
            result = Word();
            break;
          }
          auto k = y->to_u64();
          if (!k || too_big(x->bitlen() + *k))
            return fault(FaultKind::BitBudgetExceeded, "SHL result too large");
          result = shl(*x, *k);
          break;
        }
        case Opcode::SHR: {
          auto k = y->to_u64();
          result = (!k || *k >= x->bitlen()) ? Word() : shr(*x, *k);
          break;
        }
        default: break;
      }
      if (options_.bit_budget) {
        std::uint64_t after = mem.stored_bits() - mem.bits_at(dst) +
                              (result->is_zero() ? 0 : result->bitlen());
        if (after > *options_.bit_budget)
          return fault(FaultKind::BitBudgetExceeded, "stored bits exceed budget");
      }
      bits[n_bits++] = result->bitlen();
      break;
    }
  }

  state.executed += 1;
  state.unit_cost += 1;
  state.log_cost += log_cost_from_bits({bits.data(), n_bits}, {addrs.data(), n_addrs});

  if (record) {
    record->pc = pc;
    record->op = d.op;
    record->addresses.assign(effective.begin(), effective.begin() + n_effective);
    record->written_bits = result ? std::optional(result->bitlen()) : std::nullopt;
  }
  if (tracker) {
    for (std::size_t i = 0; i < n_addrs; ++i) tracker->touch(addrs[i]);
    if (result) tracker->max_cell_bits = std::max(tracker->max_cell_bits, result->bitlen());
  }
  if (result) mem.set(dst, std::move(*result));
  if (halt) state.halted = true;
  state.pc = *next_pc;
  return std::nullopt;
}

RunResult Executor::execute(const MemoryImage& image, std::vector<TraceRecord>* records) {
  RunResult out;
  out.state.memory = Memory(image);
  Tracker tracker;
  while (!out.state.halted) {
    if (out.state.executed >= options_.fuel) {
      out.fault = Fault{FaultKind::FuelExhausted, out.state.pc, "fuel exhausted"};
      break;
    }
    TraceRecord rec;
    auto f = step_impl(out.state, records ? &rec : nullptr, &tracker);
    if (f) {
      if (records) records->push_back({out.state.pc, out.state.pc < code_.size() ? code_[out.state.pc].op : Opcode::HALT, {}, std::nullopt});
      out.fault = std::move(f);
      break;
    }
    if (records) records->push_back(std::move(rec));
  }
  out.report.executed = out.state.executed;
  out.report.unit_cost = out.state.unit_cost;
  out.report.log_cost = out.state.log_cost;
  out.report.max_cell_bits = tracker.max_cell_bits;
  out.report.cells_touched = tracker.touched();
  return out;
}

RunResult Executor::run(const MemoryImage& image) { return execute(image, nullptr); }

TraceResult Executor::trace(const MemoryImage& image) {
  TraceResult t;
  t.result = execute(image, &t.records);
  return t;
}

RunResult run(const Program& program, const MemoryImage& image, RunOptions options) {
  return Executor(program, options).run(image);
}

TraceResult trace(const Program& program, const MemoryImage& image, RunOptions options) {
  return Executor(program, options).trace(image);
}

}  // namespace mram
