#include "mram/ndtm.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mram::ndtm {

namespace {

std::string move_name(Move m) {
  switch (m) {
    case Move::Left: return "L";
    case Move::Right: return "R";
    case Move::Stay: return "N";
  }
  return "N";
}

Move parse_move(const std::string& s) {
  if (s == "L") return Move::Left;
  if (s == "R") return Move::Right;
  if (s == "N") return Move::Stay;
  throw SpecError("move must be \"L\", \"R\" or \"N\", got \"" + s + "\"");
}

template <class T>
bool has(const std::vector<T>& v, const T& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

void report_duplicates(const std::vector<std::string>& v, const std::string& what,
                       std::vector<std::string>& out) {
  std::set<std::string> seen;
  for (const auto& x : v)
    if (!seen.insert(x).second) out.push_back("duplicate " + what + " '" + x + "'");
}

}  // namespace

NdtmSpec spec_from_json(const nlohmann::json& j) {
  try {
    NdtmSpec s;
    s.states = j.at("states").get<std::vector<std::string>>();
    s.tape_alphabet = j.at("tape_alphabet").get<std::vector<std::string>>();
    s.blank = j.at("blank").get<std::string>();
    s.input_alphabet = j.at("input_alphabet").get<std::vector<std::string>>();
    s.start = j.at("start").get<std::string>();
    s.accept = j.at("accept").get<std::vector<std::string>>();
    s.reject = j.at("reject").get<std::vector<std::string>>();
    for (const auto& t : j.at("transitions")) {
      if (!t.is_array() || t.size() != 5)
        throw SpecError("each transition must be a 5-element array");
      s.transitions.push_back({t[0].get<std::string>(), t[1].get<std::string>(),
                               t[2].get<std::string>(), t[3].get<std::string>(),
                               parse_move(t[4].get<std::string>())});
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed machine JSON: ") + e.what());
  }
}

nlohmann::json spec_to_json(const NdtmSpec& s) {
  nlohmann::json t = nlohmann::json::array();
  for (const auto& tr : s.transitions)
    t.push_back({tr.from, tr.read, tr.to, tr.write, move_name(tr.move)});
  return {{"states", s.states},         {"tape_alphabet", s.tape_alphabet},
          {"blank", s.blank},           {"input_alphabet", s.input_alphabet},
          {"transitions", std::move(t)}, {"start", s.start},
          {"accept", s.accept},         {"reject", s.reject}};
}

NdtmSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  try {
    return spec_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(path + ": " + e.what());
  }
}

NdtmSpec corpus_machine(std::string_view name) {
  using M = Move;
  NdtmSpec s;
  if (name == "guess-bit") {
    s.states = {"s", "acc", "rej"};
    s.tape_alphabet = {"0", "1"};
    s.blank = "0";
    s.input_alphabet = {"1"};
    s.transitions = {{"s", "0", "acc", "1", M::Stay}, {"s", "0", "rej", "0", M::Stay}};
    s.start = "s";
    s.accept = {"acc"};
    s.reject = {"rej"};
  } else if (name == "always-reject") {
    s.states = {"s", "rej"};
    s.tape_alphabet = {"_", "1"};
    s.blank = "_";
    s.input_alphabet = {"1"};
    s.transitions = {{"s", "_", "rej", "_", M::Stay}};
    s.start = "s";
    s.reject = {"rej"};
  } else if (name == "parity") {
    s.states = {"even", "odd", "acc", "rej"};
    s.tape_alphabet = {"_", "0", "1"};
    s.blank = "_";
    s.input_alphabet = {"0", "1"};
    s.transitions = {{"even", "0", "even", "0", M::Right}, {"even", "1", "odd", "1", M::Right},
                     {"odd", "0", "odd", "0", M::Right},   {"odd", "1", "even", "1", M::Right},
                     {"even", "_", "rej", "_", M::Stay},   {"odd", "_", "acc", "_", M::Stay}};
    s.start = "even";
    s.accept = {"acc"};
    s.reject = {"rej"};
  } else {
    throw SpecError("unknown corpus machine '" + std::string(name) + "'");
  }
  return s;
}

std::vector<std::string> corpus_names() { return {"guess-bit", "always-reject", "parity"}; }

std::vector<std::string> validate_spec(const NdtmSpec& s) {
  std::vector<std::string> out;
  if (s.states.empty()) out.push_back("no states");
  report_duplicates(s.states, "state", out);
  report_duplicates(s.tape_alphabet, "tape symbol", out);
  report_duplicates(s.input_alphabet, "input symbol", out);
  if (!has(s.tape_alphabet, s.blank)) out.push_back("blank '" + s.blank + "' not in tape alphabet");
  for (const auto& a : s.input_alphabet) {
    if (a == s.blank) out.push_back("input alphabet contains the blank");
    else if (!has(s.tape_alphabet, a)) out.push_back("input symbol '" + a + "' not in tape alphabet");
  }
  if (!has(s.states, s.start)) out.push_back("start state '" + s.start + "' not in states");
  for (const auto& q : s.accept)
    if (!has(s.states, q)) out.push_back("accepting state '" + q + "' not in states");
  for (const auto& q : s.reject) {
    if (!has(s.states, q)) out.push_back("rejecting state '" + q + "' not in states");
    if (has(s.accept, q)) out.push_back("state '" + q + "' is both accepting and rejecting");
  }
  std::set<std::tuple<std::string, std::string, std::string, std::string, Move>> seen;
  for (std::size_t i = 0; i < s.transitions.size(); ++i) {
    const auto& t = s.transitions[i];
    const std::string at = "transition " + std::to_string(i) + ": ";
    if (!has(s.states, t.from)) out.push_back(at + "unknown state '" + t.from + "'");
    if (!has(s.states, t.to)) out.push_back(at + "unknown state '" + t.to + "'");
    if (!has(s.tape_alphabet, t.read)) out.push_back(at + "unknown symbol '" + t.read + "'");
    if (!has(s.tape_alphabet, t.write)) out.push_back(at + "unknown symbol '" + t.write + "'");
    if (has(s.accept, t.from) || has(s.reject, t.from))
      out.push_back(at + "leaves halting state '" + t.from + "'");
    if (!seen.insert({t.from, t.read, t.to, t.write, t.move}).second)
      out.push_back(at + "duplicate transition");
  }
  return out;
}

Machine::Machine(NdtmSpec spec) : spec_(std::move(spec)) {
  if (auto defects = validate_spec(spec_); !defects.empty()) {
    std::string msg = "invalid machine:";
    for (const auto& d : defects) msg += "\n  " + d;
    throw SpecError(msg);
  }
  state_names_.push_back(spec_.start);
  for (const auto& q : spec_.states)
    if (q != spec_.start) state_names_.push_back(q);
  symbol_names_.push_back(spec_.blank);
  for (const auto& a : spec_.tape_alphabet)
    if (a != spec_.blank) symbol_names_.push_back(a);

  accepting_.assign(state_names_.size(), false);
  rejecting_.assign(state_names_.size(), false);
  for (const auto& q : spec_.accept) accepting_[static_cast<std::size_t>(*state_index(q))] = true;
  for (const auto& q : spec_.reject) rejecting_[static_cast<std::size_t>(*state_index(q))] = true;
  input_symbol_.assign(symbol_names_.size(), false);
  for (const auto& a : spec_.input_alphabet)
    input_symbol_[static_cast<std::size_t>(*symbol_index(a))] = true;
  for (const auto& t : spec_.transitions)
    delta_.push_back({*state_index(t.from), *symbol_index(t.read), *state_index(t.to),
                      *symbol_index(t.write), t.move});
}

std::optional<int> Machine::state_index(std::string_view name) const {
  for (std::size_t i = 0; i < state_names_.size(); ++i)
    if (state_names_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> Machine::symbol_index(std::string_view name) const {
  for (std::size_t i = 0; i < symbol_names_.size(); ++i)
    if (symbol_names_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::vector<int> Machine::encode_input(const std::vector<std::string>& symbols) const {
  std::vector<int> out;
  for (const auto& s : symbols) {
    auto d = symbol_index(s);
    if (!d || !input_symbol_[static_cast<std::size_t>(*d)])
      throw SpecError("'" + s + "' is not an input symbol");
    out.push_back(*d);
  }
  return out;
}

std::vector<std::string> split_word(std::string_view word) {
  std::vector<std::string> out;
  if (word.empty()) return out;
  if (word.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    for (std::size_t i = 0; i <= word.size(); ++i)
      if (i == word.size() || word[i] == ',') {
        out.emplace_back(word.substr(start, i - start));
        start = i + 1;
      }
    return out;
  }
  for (char c : word) out.emplace_back(1, c);
  return out;
}

std::string describe(const Machine& m, const Configuration& c) {
  std::ostringstream os;
  os << m.state_name(c.state) << " @" << c.head << " [";
  for (std::size_t i = 0; i < c.tape.size(); ++i) os << (i ? " " : "") << m.symbol_name(c.tape[i]);
  os << "]";
  return os.str();
}

Configuration initial_config(const Machine&, const std::vector<int>& input, std::uint64_t space) {
  if (space == 0) throw SpecError("space bound must be at least 1");
  if (input.size() > space)
    throw SpecError("input of length " + std::to_string(input.size()) +
                    " does not fit in " + std::to_string(space) + " cells");
  Configuration c;
  c.tape.assign(space, 0);
  std::copy(input.begin(), input.end(), c.tape.begin());
  return c;
}

std::vector<Configuration> successors(const Machine& m, const Configuration& c) {
  std::vector<Configuration> out;
  if (m.halting(c.state)) return out;
  const int scanned = c.tape[c.head];
  for (const Transition& t : m.transitions()) {
    if (t.from != c.state || t.read != scanned) continue;
    std::size_t head = c.head;
    if (t.move == Move::Left) {
      if (head == 0) continue;
      --head;
    } else if (t.move == Move::Right) {
      if (head + 1 >= c.tape.size()) continue;
      ++head;
    }
    Configuration next = c;
    next.state = t.to;
    next.tape[c.head] = t.write;
    next.head = head;
    out.push_back(std::move(next));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OracleResult oracle_accepts(const Machine& m, const std::vector<int>& input, Bounds bounds) {
  std::vector<Configuration> nodes{initial_config(m, input, bounds.space)};
  std::vector<std::size_t> parent{0};
  std::map<Configuration, std::size_t> seen{{nodes[0], 0}};

  auto finish = [&](std::size_t hit) {
    OracleResult r;
    r.accepted = true;
    r.explored = nodes.size();
    for (std::size_t i = hit;; i = parent[i]) {
      r.witness.push_back(nodes[i]);
      if (i == 0) break;
    }
    std::reverse(r.witness.begin(), r.witness.end());
    return r;
  };

  if (m.accepting(nodes[0].state)) return finish(0);
  std::vector<std::size_t> frontier{0};
  for (std::uint64_t t = 0; t < bounds.time && !frontier.empty(); ++t) {
    std::vector<std::size_t> next;
    for (std::size_t id : frontier) {
      for (auto& s : successors(m, nodes[id])) {
        if (seen.contains(s)) continue;
        const std::size_t sid = nodes.size();
        seen.emplace(s, sid);
        nodes.push_back(std::move(s));
        parent.push_back(id);
        if (m.accepting(nodes[sid].state)) return finish(sid);
        next.push_back(sid);
      }
    }
    frontier = std::move(next);
  }
  OracleResult r;
  r.explored = nodes.size();
  return r;
}

ConfigSetCodec::ConfigSetCodec(const Machine& m, std::uint64_t space)
    : g_(static_cast<std::uint64_t>(m.num_symbols())),
      q_(static_cast<std::uint64_t>(m.num_states())),
      s_(space) {
  if (space == 0) throw SpecError("space bound must be at least 1");
  try {
    pow_.push_back(1);
    for (std::uint64_t i = 0; i < space; ++i) pow_.push_back(checked_pow(g_, i + 1));
    block_ = pow_[space - 1];
    n_ = q_ * s_;
    if (pow_[space] != 0 && n_ > UINT64_MAX / pow_[space]) throw PreconditionError("overflow");
    n_ *= pow_[space];
  } catch (const PreconditionError&) {
    throw SpecError("configuration universe does not fit in 64 bits");
  }
}

std::uint64_t ConfigSetCodec::index(const Configuration& c) const {
  if (c.tape.size() != s_ || c.head >= s_ || c.state < 0 ||
      static_cast<std::uint64_t>(c.state) >= q_)
    throw PreconditionError("configuration does not match codec");
  std::uint64_t rest = 0;
  for (std::size_t j = 0; j < c.tape.size(); ++j) {
    if (j == c.head) continue;
    const std::size_t rank = j < c.head ? j : j - 1;
    rest += static_cast<std::uint64_t>(c.tape[j]) * pow_[rank];
  }
  return base(static_cast<std::uint64_t>(c.state), c.head,
              static_cast<std::uint64_t>(c.tape[c.head])) + rest;
}

Configuration ConfigSetCodec::unindex(std::uint64_t i) const {
  if (i >= n_) throw PreconditionError("configuration index out of range");
  std::uint64_t rest = i % block_;
  std::uint64_t top = i / block_;
  Configuration c;
  c.tape.assign(s_, 0);
  const auto scanned = top % g_;
  top /= g_;
  c.head = static_cast<std::size_t>(top % s_);
  c.state = static_cast<int>(top / s_);
  c.tape[c.head] = static_cast<int>(scanned);
  for (std::size_t j = 0; j < s_; ++j) {
    if (j == c.head) continue;
    c.tape[j] = static_cast<int>(rest % g_);
    rest /= g_;
  }
  return c;
}

nlohmann::json ConfigSetCodec::to_json(const Machine& m) const {
  nlohmann::json states = nlohmann::json::array();
  for (int q = 0; q < m.num_states(); ++q) states.push_back(m.state_name(q));
  nlohmann::json symbols = nlohmann::json::array();
  for (int a = 0; a < m.num_symbols(); ++a) symbols.push_back(m.symbol_name(a));
  return {{"state_numbering", states}, {"symbol_numbering", symbols}, {"space", s_},
          {"g", g_}, {"universe_bits", n_}};
}

}  // namespace mram::ndtm
