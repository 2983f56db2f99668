#include "mram/problems.hpp"

#include "mram/vm.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace mram::problems {

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<long long> to_int(std::string_view tok) {
  long long v = 0;
  const char* first = tok.data();
  if (!tok.empty() && tok[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || first == tok.data() + tok.size())
    return std::nullopt;
  return v;
}

}  // namespace

DimacsResult parse_dimacs(std::string_view text) {
  DimacsResult res;
  auto diag = [&](std::size_t line, std::string msg) {
    res.diagnostics.push_back({line, std::move(msg)});
  };

  std::optional<std::uint32_t> vars;
  std::optional<std::uint64_t> declared;
  std::size_t header_line = 0;
  CnfFormula f;
  std::vector<int> current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool stop = false;

  while (pos <= text.size() && !stop) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    auto toks = tokens(line);
    if (toks.empty()) continue;
    if (toks[0] == "c" || toks[0][0] == 'c') continue;
    if (toks[0] == "%") break;
    if (toks[0] == "p") {
      if (vars) {
        diag(line_no, "duplicate header");
        continue;
      }
      auto v = toks.size() == 4 ? to_int(toks[2]) : std::nullopt;
      auto c = toks.size() == 4 ? to_int(toks[3]) : std::nullopt;
      if (toks.size() != 4 || toks[1] != "cnf" || !v || !c || *v < 0 || *c < 0 ||
          *v > 1'000'000) {
        diag(line_no, "malformed header: expected 'p cnf <vars> <clauses>'");
        stop = true;
        continue;
      }
      vars = static_cast<std::uint32_t>(*v);
      declared = static_cast<std::uint64_t>(*c);
      header_line = line_no;
      continue;
    }
    if (!vars) {
      diag(line_no, "clause data before 'p cnf' header");
      stop = true;
      continue;
    }
    for (auto tok : toks) {
      auto v = to_int(tok);
      if (!v) {
        diag(line_no, "malformed literal '" + std::string(tok) + "'");
        continue;
      }
      if (*v == 0) {
        if (current.empty())
          diag(line_no, "empty clause");
        else
          f.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (*v > static_cast<long long>(*vars) || *v < -static_cast<long long>(*vars)) {
        diag(line_no, "literal out of range: " + std::string(tok));
        continue;
      }
      current.push_back(static_cast<int>(*v));
    }
    if (eol == text.size()) break;
  }
  if (!current.empty()) f.clauses.push_back(std::move(current));

  if (!vars && res.diagnostics.empty()) diag(line_no == 0 ? 1 : line_no, "missing 'p cnf' header");
  if (vars && res.diagnostics.empty() && f.clauses.size() != *declared)
    diag(header_line, "clause count mismatch: header declares " + std::to_string(*declared) +
                          ", found " + std::to_string(f.clauses.size()));
  if (res.diagnostics.empty()) {
    f.num_vars = *vars;
    res.formula = std::move(f);
  }
  return res;
}

std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream os;
  os << "p cnf " << f.num_vars << " " << f.clauses.size() << "\n";
  for (const auto& c : f.clauses) {
    for (int l : c) os << l << " ";
    os << "0\n";
  }
  return os.str();
}

bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment) {
  for (const auto& clause : f.clauses) {
    bool sat = false;
    for (int l : clause) {
      const bool value = assignment[static_cast<std::size_t>(std::abs(l) - 1)];
      if ((l > 0) == value) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

SatResult sat_oracle(const CnfFormula& f) {
  if (f.num_vars > kSatOracleMaxVars)
    throw PreconditionError("sat_oracle supports at most " + std::to_string(kSatOracleMaxVars) +
                            " variables");
  SatResult r;
  const std::uint64_t total = std::uint64_t{1} << f.num_vars;
  std::vector<bool> a(f.num_vars);
  for (std::uint64_t code = 0; code < total; ++code) {
    // x1 is the most significant position of the counter.
    for (std::uint32_t v = 0; v < f.num_vars; ++v) a[v] = (code >> (f.num_vars - 1 - v)) & 1U;
    ++r.tested;
    if (satisfies(f, a)) {
      r.assignment = a;
      return r;
    }
  }
  return r;
}

GeneratedMachine cnf_to_ndtm(const CnfFormula& f) {
  if (f.num_vars == 0) throw PreconditionError("cnf_to_ndtm needs at least one variable");
  const std::uint64_t n = f.num_vars;
  const std::size_t m = f.clauses.size();

  ndtm::NdtmSpec spec;
  spec.tape_alphabet = {"_", "0", "1"};
  spec.blank = "_";
  spec.input_alphabet = {"0", "1"};
  spec.accept = {"acc"};
  spec.reject = {"rej"};

  for (std::uint64_t i = 0; i < n; ++i) spec.states.push_back("g" + std::to_string(i));
  spec.start = "g0";

  // Clause c sweeps from one tape end to the other: even clauses right-to-left
  // (the guess phase leaves the head on cell n-1), odd clauses left-to-right.
  // A branch whose clause fails keeps sweeping in the failed track and rejects
  // after the last clause, so every branch lives for exactly T steps.
  enum Track { Open, Satisfied, Failed };
  auto start_pos = [&](std::size_t c) { return c % 2 == 0 ? n - 1 : 0; };
  auto final_pos = [&](std::size_t c) { return c % 2 == 0 ? 0 : n - 1; };
  auto sweep_name = [](std::size_t c, std::uint64_t p, Track t) {
    static const char* suffix[] = {"_u", "_s", "_f"};
    return "c" + std::to_string(c) + "_p" + std::to_string(p) + suffix[t];
  };

  std::set<std::tuple<std::size_t, std::uint64_t, Track>> known;
  std::vector<std::tuple<std::size_t, std::uint64_t, Track>> work;
  auto want = [&](std::size_t c, std::uint64_t p, Track t) {
    if (c == m) return std::string(t == Failed ? "rej" : "acc");
    if (known.insert({c, p, t}).second) {
      work.emplace_back(c, p, t);
      spec.states.push_back(sweep_name(c, p, t));
    }
    return sweep_name(c, p, t);
  };

  for (std::uint64_t i = 0; i < n; ++i) {
    const bool last = i + 1 == n;
    for (const char* bit : {"0", "1"}) {
      if (last)
        spec.transitions.push_back({"g" + std::to_string(i), "_", want(0, start_pos(0), Open),
                                    bit, ndtm::Move::Stay});
      else
        spec.transitions.push_back(
            {"g" + std::to_string(i), "_", "g" + std::to_string(i + 1), bit, ndtm::Move::Right});
    }
  }

  for (std::size_t w = 0; w < work.size(); ++w) {
    const auto [c, p, track] = work[w];
    const std::string from = sweep_name(c, p, track);
    const auto& clause = f.clauses[c];
    for (int x = 0; x <= 1; ++x) {
      Track now = track;
      if (now == Open)
        for (int l : clause)
          if (static_cast<std::uint64_t>(std::abs(l) - 1) == p && (l > 0) == (x == 1))
            now = Satisfied;
      const std::string sym = x ? "1" : "0";
      if (p != final_pos(c)) {
        const bool right = start_pos(c) < final_pos(c);
        const std::uint64_t np = right ? p + 1 : p - 1;
        spec.transitions.push_back(
            {from, sym, want(c, np, now), sym, right ? ndtm::Move::Right : ndtm::Move::Left});
      } else {
        const Track next = now == Satisfied ? Open : Failed;
        spec.transitions.push_back(
            {from, sym, want(c + 1, start_pos(c + 1), next), sym, ndtm::Move::Stay});
      }
    }
  }
  spec.states.push_back("acc");
  spec.states.push_back("rej");

  GeneratedMachine out;
  out.spec = std::move(spec);
  out.bounds = {n, n + n * m};
  return out;
}

CnfFormula FormulaGenerator::random(std::uint32_t num_vars, std::size_t clauses,
                                    std::size_t literals_per_clause) {
  CnfFormula f;
  f.num_vars = num_vars;
  for (std::size_t c = 0; c < clauses; ++c) {
    std::vector<int> clause;
    for (std::size_t k = 0; k < literals_per_clause; ++k) {
      const int v = static_cast<int>(below(num_vars)) + 1;
      clause.push_back(below(2) ? v : -v);
    }
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

CnfFormula FormulaGenerator::random_small(std::uint32_t max_vars, std::size_t max_clauses,
                                          std::size_t max_literals) {
  const auto vars = static_cast<std::uint32_t>(below(max_vars)) + 1;
  const std::size_t clauses = below(max_clauses) + 1;
  CnfFormula f;
  f.num_vars = vars;
  for (std::size_t c = 0; c < clauses; ++c) {
    const std::size_t len = below(max_literals) + 1;
    std::vector<int> clause;
    for (std::size_t k = 0; k < len; ++k) {
      const int v = static_cast<int>(below(vars)) + 1;
      clause.push_back(below(2) ? v : -v);
    }
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

SortProgram direct_sort_program(std::uint64_t n, std::uint64_t max_key) {
  SortProgram sp;
  sp.n = n;
  sp.max_key = max_key;
  const std::uint64_t work = cells::kInputBase + n;
  const std::uint64_t addr = work, key = work + 1, table_ptr = work + 2, out_ptr = work + 3,
                      temp = work + 4;
  sp.table_base = work + 8;
  sp.output_base = sp.table_base + max_key + 1;
  const std::uint64_t tb = sp.table_base;
  const std::uint64_t ob = sp.output_base;

  auto D = [](std::uint64_t a) { return Operand::dir(a); };
  auto I = [](std::uint64_t a) { return Operand::ind(a); };
  auto L = [](std::uint64_t v) { return Operand::lit(Word(v)); };

  ProgramBuilder b;
  // Counting pass: table[key]++ for every input cell.
  for (std::uint64_t i = 0; i < n; ++i) {
    b.emit(Opcode::ADD, {D(addr), D(cells::kInputBase + i), L(tb)});
    b.emit(Opcode::ADD, {I(addr), I(addr), L(1)});
  }
  // Sweep keys from max_key down to 1, filling the output from its last cell.
  b.emit(Opcode::LOAD, {D(out_ptr), L(ob + n - 1)});
  if (max_key >= 1) {
    b.emit(Opcode::LOAD, {D(key), L(max_key)});
    b.emit(Opcode::LOAD, {D(table_ptr), L(tb + max_key)});
    b.label("sweep");
    b.jump(Opcode::JZ, {I(table_ptr)}, "next");
    b.label("copy");
    b.emit(Opcode::LOAD, {I(out_ptr), D(key)});
    b.emit(Opcode::SUB, {D(out_ptr), D(out_ptr), L(1)});
    b.emit(Opcode::SUB, {I(table_ptr), I(table_ptr), L(1)});
    b.jump(Opcode::JNZ, {I(table_ptr)}, "copy");
    b.label("next");
    b.emit(Opcode::SUB, {D(table_ptr), D(table_ptr), L(1)});
    b.emit(Opcode::SUB, {D(key), D(key), L(1)});
    b.jump(Opcode::JNZ, {D(key)}, "sweep");
  }
  // Zeros need no writes; only the output pointer moves past them.
  b.emit(Opcode::SUB, {D(out_ptr), D(out_ptr), D(tb)});
  // Every key must have been counted inside the table.
  b.emit(Opcode::XOR, {D(temp), D(out_ptr), L(ob - 1)});
  b.jump(Opcode::JNZ, {D(temp)}, "out_of_range");
  b.emit(Opcode::HALT);
  b.label("out_of_range");
  b.emit(Opcode::DIV, {D(temp), L(1), L(0)});
  sp.program = std::move(b).finish();
  return sp;
}

}  // namespace mram::problems
