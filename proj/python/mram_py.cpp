#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mram/asm.hpp"
#include "mram/bench.hpp"
#include "mram/problems.hpp"
#include "mram/transpile.hpp"

namespace py = pybind11;
using namespace mram;

namespace {

// Words cross the boundary as Python ints, through their decimal text.
py::int_ to_py(const Word& w) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(w.to_string().c_str(), nullptr, 10));
}

Word from_py(const py::int_& v) { return Word::parse(py::str(static_cast<py::handle>(v)).cast<std::string>()); }

Program parse_or_throw(const std::string& source) {
  auto r = assembly::parse(source);
  if (!r.ok()) throw py::value_error(assembly::format_diagnostics(r.diagnostics));
  return std::move(*r.program);
}

problems::CnfFormula cnf_or_throw(const std::string& text) {
  auto r = problems::parse_dimacs(text);
  if (!r.formula) {
    std::string msg;
    for (const auto& d : r.diagnostics) msg += "line " + std::to_string(d.line) + ": " + d.message + "\n";
    throw py::value_error(msg);
  }
  return std::move(*r.formula);
}

py::dict result_dict(const RunResult& r) {
  py::dict d;
  d["output"] = to_py(r.output());
  d["halted"] = r.state.halted;
  d["executed"] = r.report.executed;
  d["unit_cost"] = r.report.unit_cost;
  d["log_cost"] = r.report.log_cost;
  d["max_cell_bits"] = r.report.max_cell_bits;
  if (r.fault)
    d["fault"] = std::string(fault_name(r.fault->kind)) + ": " + r.fault->message;
  else
    d["fault"] = py::none();
  return d;
}

ndtm::Machine machine_from(const std::string& spec_json) {
  return ndtm::Machine(ndtm::spec_from_json(nlohmann::json::parse(spec_json)));
}

}  // namespace

PYBIND11_MODULE(_mram, m) {
  m.doc() = "Unit-cost multiplication RAM workbench";

  py::register_exception<ndtm::SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<transpile::SizingError>(m, "SizingError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<bench::DisagreementError>(m, "DisagreementError", PyExc_RuntimeError);

  m.def(
      "run",
      [](const std::string& source, const std::vector<py::int_>& inputs, std::uint64_t fuel) {
        Program p = parse_or_throw(source);
        std::vector<Word> items;
        for (const auto& v : inputs) items.push_back(from_py(v));
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run(p, input_image(items), {.fuel = fuel});
        }
        return result_dict(r);
      },
      py::arg("source"), py::arg("inputs") = std::vector<py::int_>{},
      py::arg("fuel") = kDefaultFuel);

  m.def(
      "format_asm", [](const std::string& source) { return assembly::print(parse_or_throw(source)); },
      py::arg("source"));

  m.def("corpus_names", &ndtm::corpus_names);
  m.def(
      "corpus_machine",
      [](const std::string& name) { return ndtm::spec_to_json(ndtm::corpus_machine(name)).dump(); },
      py::arg("name"));

  m.def(
      "oracle_accepts",
      [](const std::string& spec_json, const std::vector<std::string>& input, std::uint64_t space,
         std::uint64_t time) {
        auto machine = machine_from(spec_json);
        auto r = ndtm::oracle_accepts(machine, machine.encode_input(input), {space, time});
        return py::make_tuple(r.accepted, r.explored);
      },
      py::arg("spec_json"), py::arg("input"), py::arg("space"), py::arg("time"));

  m.def(
      "triple_check",
      [](const std::string& spec_json, const std::vector<std::string>& input, std::uint64_t space,
         std::uint64_t time) {
        auto machine = machine_from(spec_json);
        return transpile::report_to_json(
                   transpile::triple_check(machine, machine.encode_input(input), {space, time}))
            .dump();
      },
      py::arg("spec_json"), py::arg("input"), py::arg("space"), py::arg("time"));

  m.def(
      "sat_oracle",
      [](const std::string& dimacs) -> std::optional<std::vector<bool>> {
        return problems::sat_oracle(cnf_or_throw(dimacs)).assignment;
      },
      py::arg("dimacs"));

  m.def(
      "cnf_to_ndtm",
      [](const std::string& dimacs) {
        auto gm = problems::cnf_to_ndtm(cnf_or_throw(dimacs));
        return py::make_tuple(ndtm::spec_to_json(gm.spec).dump(), gm.bounds.space, gm.bounds.time);
      },
      py::arg("dimacs"));

  m.def(
      "direct_sort",
      [](const std::vector<std::uint64_t>& keys, std::uint64_t max_key) {
        auto sp = problems::direct_sort_program(keys.size(), max_key);
        std::vector<Word> items(keys.begin(), keys.end());
        auto r = run(sp.program, input_image(items));
        if (!r.ok()) throw py::value_error("sort program faulted: " + r.fault->message);
        std::vector<py::int_> out;
        for (std::uint64_t i = 0; i < sp.n; ++i) out.push_back(to_py(r.state.memory.get(sp.output_base + i)));
        return py::make_tuple(out, r.report.executed);
      },
      py::arg("keys"), py::arg("max_key"));

  m.def(
      "scaling",
      [](const std::string& problem, const std::vector<std::uint64_t>& sizes, std::uint64_t seed) {
        std::vector<bench::ScalingRow> rows;
        {
          py::gil_scoped_release release;
          rows = bench::run_scaling(problem, sizes, seed);
        }
        nlohmann::json j;
        j["csv"] = bench::rows_to_csv(rows);
        j["fit"] = bench::fit_to_json(bench::fit_report(rows));
        return j.dump();
      },
      py::arg("problem"), py::arg("sizes"), py::arg("seed") = 7);
}
