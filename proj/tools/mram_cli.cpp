// mram: command-line front end over the mram_core library.
// Exit codes: 0 success, 1 verdict disagreement or vm fault, 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "mram/asm.hpp"
#include "mram/bench.hpp"
#include "mram/confset.hpp"
#include "mram/problems.hpp"
#include "mram/transpile.hpp"
#include "mram/vm.hpp"

namespace {

using namespace mram;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UsageError("cannot write " + path);
}

Program load_program(const std::string& path) {
  auto parsed = assembly::parse(slurp(path));
  if (!parsed.ok()) throw UsageError(path + ":\n" + assembly::format_diagnostics(parsed.diagnostics));
  return *parsed.program;
}

std::vector<Word> parse_input_list(const std::string& text) {
  std::vector<Word> items;
  if (text.empty()) return items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      items.push_back(Word::parse(item));
    } catch (const std::exception&) {
      throw UsageError("bad input item '" + item + "'");
    }
  }
  return items;
}

problems::CnfFormula load_cnf(const std::string& path) {
  auto r = problems::parse_dimacs(slurp(path));
  if (!r.formula) {
    std::string msg = path + ":";
    for (const auto& d : r.diagnostics) msg += "\n  line " + std::to_string(d.line) + ": " + d.message;
    throw UsageError(msg);
  }
  return *r.formula;
}

const char* verdict(bool accepted) { return accepted ? "accept" : "reject"; }

int cmd_run(const std::string& path, const std::string& input, const std::string& cost,
            std::uint64_t fuel, bool with_trace) {
  auto program = load_program(path);
  RunOptions opts;
  opts.fuel = fuel;
  auto image = input_image(parse_input_list(input));
  RunResult result;
  if (with_trace) {
    auto t = trace(program, image, opts);
    for (const auto& r : t.records) {
      std::cout << r.pc << '\t' << opcode_name(r.op);
      for (auto a : r.addresses) std::cout << " @" << a;
      if (r.written_bits) std::cout << "\t-> " << *r.written_bits << " bits";
      std::cout << '\n';
    }
    result = std::move(t.result);
  } else {
    result = run(program, image, opts);
  }
  if (result.fault) {
    std::cerr << "fault: " << fault_name(result.fault->kind) << " at pc " << result.fault->pc
              << ": " << result.fault->message << '\n';
  } else {
    std::cout << "output: " << result.output().to_string() << '\n';
  }
  std::cout << "executed: " << result.report.executed << '\n';
  if (cost == "unit" || cost == "both") std::cout << "unit_cost: " << result.report.unit_cost << '\n';
  if (cost == "log" || cost == "both") std::cout << "log_cost: " << result.report.log_cost << '\n';
  return result.fault ? 1 : 0;
}

struct NdtmArgs {
  std::string action;
  std::string path;
  std::string input;
  std::uint64_t space = 0;
  std::uint64_t time = 0;
  std::string out;
  std::string layout;
};

int cmd_ndtm(const NdtmArgs& a) {
  ndtm::NdtmSpec spec;
  try {
    spec = ndtm::load_spec(a.path);
  } catch (const ndtm::SpecError& e) {
    throw UsageError(e.what());
  }
  if (a.action == "validate") {
    auto defects = ndtm::validate_spec(spec);
    for (const auto& d : defects) std::cout << d << '\n';
    if (defects.empty()) std::cout << "ok\n";
    return defects.empty() ? 0 : 1;
  }
  ndtm::Machine m(spec);
  auto input = m.encode_input(ndtm::split_word(a.input));
  ndtm::Bounds bounds;
  bounds.space = a.space ? a.space : std::max<std::uint64_t>(1, input.size());
  bounds.time = a.time ? a.time : 4 * bounds.space;

  if (a.action == "oracle") {
    auto r = ndtm::oracle_accepts(m, input, bounds);
    std::cout << verdict(r.accepted) << " (explored " << r.explored << ")\n";
    for (const auto& c : r.witness) std::cout << "  " << ndtm::describe(m, c) << '\n';
    return 0;
  }
  ndtm::ConfigSetCodec codec(m, bounds.space);
  if (a.action == "simulate") {
    auto r = confset::reachable_accepts(codec, m, input, bounds);
    std::cout << verdict(r.accepted) << " (iterations " << r.iterations << ", N = "
              << codec.universe() << ")\n";
    return 0;
  }
  if (a.action == "compile") {
    auto art = transpile::emit(codec, m, bounds);
    auto seed = transpile::seed_image(codec, m, input, bounds);
    nlohmann::json layout = art.layout.to_json();
    layout["codec"] = codec.to_json(m);
    auto idx = seed.find(art.layout.input_index);
    layout["initial_index"] = idx == seed.end() ? std::string("0") : idx->second.to_string();
    layout["bounds"] = {{"space", bounds.space}, {"time", bounds.time}};
    layout["executed_bound"] = art.stats.executed_bound;
    if (a.out.empty()) std::cout << assembly::print(art.program);
    else spit(a.out, assembly::print(art.program));
    if (!a.layout.empty()) spit(a.layout, layout.dump(2) + "\n");
    else std::cerr << "initial_index: " << layout["initial_index"].get<std::string>() << '\n';
    return 0;
  }
  // triple
  auto r = transpile::triple_check(m, input, bounds);
  std::cout << transpile::report_to_json(r).dump(2) << '\n';
  return r.agree() ? 0 : 1;
}

int cmd_sat(const std::string& action, const std::string& path, const std::string& out) {
  auto f = load_cnf(path);
  if (action == "oracle") {
    auto r = problems::sat_oracle(f);
    if (r.assignment) {
      std::cout << "sat";
      for (std::size_t i = 0; i < r.assignment->size(); ++i)
        std::cout << ' ' << ((*r.assignment)[i] ? "" : "-") << i + 1;
      std::cout << "\n";
    } else {
      std::cout << "unsat\n";
    }
    std::cout << "tested: " << r.tested << '\n';
    return 0;
  }
  auto gm = problems::cnf_to_ndtm(f);
  if (action == "compile") {
    nlohmann::json j = ndtm::spec_to_json(gm.spec);
    j["bounds"] = {{"space", gm.bounds.space}, {"time", gm.bounds.time}};
    if (out.empty()) std::cout << j.dump(2) << '\n';
    else spit(out, j.dump(2) + "\n");
    return 0;
  }
  // check: the full loop, formula to verdicts
  ndtm::Machine m(gm.spec);
  auto r = transpile::triple_check(m, {}, gm.bounds);
  auto j = transpile::report_to_json(r);
  j["sat_oracle"] = problems::sat_oracle(f).assignment ? "sat" : "unsat";
  std::cout << j.dump(2) << '\n';
  return r.agree() && (j["sat_oracle"] == "sat") == r.oracle_accepted ? 0 : 1;
}

int cmd_bench(const std::string& problem, const std::string& sizes_text, std::uint64_t seed,
              const std::string& report_path) {
  bench::ReportConfig config;
  config.problem = problem;
  try {
    config.sizes = bench::parse_sizes(sizes_text);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  config.seed = seed;
  std::vector<bench::ScalingRow> rows;
  try {
    rows = bench::run_scaling(problem, config.sizes, seed);
  } catch (const bench::DisagreementError& e) {
    std::cerr << "disagreement: " << e.what() << '\n' << bench::rows_to_csv(e.rows);
    return 1;
  }
  std::cout << bench::rows_to_csv(rows);
  if (rows.size() >= 3) {
    auto fit = bench::fit_report(rows);
    for (const auto& m : fit.metrics) {
      std::cout << m.metric << ": " << bench::growth_name(m.growth) << " (slopes";
      for (double s : m.slopes) std::cout << ' ' << s;
      std::cout << ")\n";
    }
    if (!report_path.empty()) {
      auto sidecar = bench::write_report(rows, fit, config, report_path);
      std::cerr << "wrote " << report_path << " and " << sidecar << '\n';
    }
  } else if (!report_path.empty()) {
    throw UsageError("a report needs at least 3 sizes");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MRAM workbench: machine model, NDTM transpiler and scaling experiments"};
  app.require_subcommand(1);

  std::string path, input, cost = "both", out, layout_path;
  std::uint64_t fuel = kDefaultFuel;
  bool with_trace = false;

  auto* run_cmd = app.add_subcommand("run", "Execute an MRAM assembly program");
  run_cmd->add_option("program", path, "Assembly file")->required();
  run_cmd->add_option("--input", input, "Comma-separated input items (cells 2..)");
  run_cmd->add_option("--cost", cost, "Cost report")->check(CLI::IsMember({"unit", "log", "both"}));
  run_cmd->add_option("--fuel", fuel, "Instruction limit");
  run_cmd->add_flag("--trace", with_trace, "Print one line per executed instruction");

  auto* fmt_cmd = app.add_subcommand("fmt", "Print a program in canonical form");
  fmt_cmd->add_option("program", path, "Assembly file")->required();

  NdtmArgs nd;
  auto* ndtm_cmd = app.add_subcommand("ndtm", "Validate, search, simulate or compile a machine");
  ndtm_cmd->add_option("action", nd.action, "validate | oracle | simulate | compile | triple")
      ->required()
      ->check(CLI::IsMember({"validate", "oracle", "simulate", "compile", "triple"}));
  ndtm_cmd->add_option("spec", nd.path, "Machine JSON")->required();
  ndtm_cmd->add_option("--input", nd.input, "Input word (symbols per character, or comma-separated)");
  ndtm_cmd->add_option("--space", nd.space, "Tape cells S (default max(1, |w|))");
  ndtm_cmd->add_option("--time", nd.time, "Step bound T (default 4 S)");
  ndtm_cmd->add_option("-o,--output", nd.out, "Write the compiled program here");
  ndtm_cmd->add_option("--layout", nd.layout, "Write the layout JSON here");

  std::string sat_action;
  auto* sat_cmd = app.add_subcommand("sat", "Brute-force or compile a DIMACS formula");
  sat_cmd->add_option("action", sat_action, "oracle | compile | check")
      ->required()
      ->check(CLI::IsMember({"oracle", "compile", "check"}));
  sat_cmd->add_option("formula", path, "DIMACS CNF file")->required();
  sat_cmd->add_option("-o,--output", out, "Write the generated machine JSON here");

  std::string sort_action;
  std::uint64_t sort_n = 4, max_key = 15;
  auto* sort_cmd = app.add_subcommand("sort", "Emit the direct-addressing counting sort");
  sort_cmd->add_option("action", sort_action, "emit")->required()->check(CLI::IsMember({"emit"}));
  sort_cmd->add_option("--n", sort_n, "Number of keys");
  sort_cmd->add_option("--max-key", max_key, "Largest admissible key");

  std::string bench_action, problem = "sat", sizes = "1..4", report;
  std::uint64_t seed = 7;
  auto* bench_cmd = app.add_subcommand("bench", "Scaling experiments");
  bench_cmd->add_option("action", bench_action, "scaling")->required()->check(CLI::IsMember({"scaling"}));
  bench_cmd->add_option("--problem", problem, "sat, guess-bit, always-reject or parity");
  bench_cmd->add_option("--sizes", sizes, "Range a..b or list a,b,c");
  bench_cmd->add_option("--seed", seed, "Generator seed");
  bench_cmd->add_option("--report", report, "CSV path; a JSON sidecar is written next to it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return cmd_run(path, input, cost, fuel, with_trace);
    if (*fmt_cmd) {
      std::cout << assembly::print(load_program(path));
      return 0;
    }
    if (*ndtm_cmd) return cmd_ndtm(nd);
    if (*sat_cmd) return cmd_sat(sat_action, path, out);
    if (*sort_cmd) {
      std::cout << assembly::print(problems::direct_sort_program(sort_n, max_key).program);
      return 0;
    }
    if (*bench_cmd) return cmd_bench(problem, sizes, seed, report);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ndtm::SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const transpile::SizingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
