#include "mram/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mram/problems.hpp"

namespace mram::bench {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t n) {
  // splitmix64 finalizer, so neighbouring sizes get unrelated formulas
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (n + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

}  // namespace

Instance make_instance(const std::string& problem, std::uint64_t n, std::uint64_t seed) {
  if (problem == "sat") {
    if (n == 0) throw PreconditionError("sat instances need n >= 1");
    problems::FormulaGenerator gen(mix_seed(seed, n));
    auto f = gen.random(static_cast<std::uint32_t>(n), 2 * n, 3);
    auto gm = problems::cnf_to_ndtm(f);
    return {std::move(gm.spec), {}, gm.bounds};
  }
  Instance inst{ndtm::corpus_machine(problem), {}, {n + 1, 2 * (n + 1)}};
  if (problem == "parity") {
    inst.input.assign(n, "1");
    inst.bounds.time = n + 1;
  }
  return inst;
}

std::vector<ScalingRow> run_scaling(const std::string& problem,
                                    const std::vector<std::uint64_t>& sizes, std::uint64_t seed,
                                    const ScalingOptions& options) {
  std::vector<std::uint64_t> ordered = sizes;
  std::sort(ordered.begin(), ordered.end());
  std::vector<ScalingRow> rows;
  for (auto n : ordered) {
    auto inst = make_instance(problem, n, seed);
    ndtm::Machine m(inst.spec);
    auto input = m.encode_input(inst.input);

    auto start = std::chrono::steady_clock::now();
    auto report = options.checker ? options.checker(m, input, inst.bounds)
                                  : transpile::triple_check(m, input, inst.bounds, options.check);
    auto stop = std::chrono::steady_clock::now();

    ScalingRow row;
    row.n = n;
    row.S = inst.bounds.space;
    row.T = inst.bounds.time;
    row.N_bits = report.universe_bits;
    row.oracle_nodes = report.oracle_explored;
    row.executed = report.cost.executed;
    row.unit_cost = report.cost.unit_cost;
    row.log_cost = report.cost.log_cost;
    row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    row.executed_bound = report.stats.executed_bound;

    if (!report.agree()) {
      std::ostringstream msg;
      msg << problem << " n=" << n << ": verdicts disagree (oracle "
          << (report.oracle_accepted ? "accept" : "reject") << "; confset "
          << (report.confset_accepted ? "accept" : "reject") << "; vm ";
      if (report.vm_accepted) msg << (*report.vm_accepted ? "accept" : "reject");
      else if (report.vm_fault) msg << "fault " << fault_name(report.vm_fault->kind);
      else msg << "none";
      msg << ")";
      rows.push_back(row);
      throw DisagreementError(msg.str(), std::move(rows));
    }
    rows.push_back(row);
  }
  return rows;
}

const MetricFit& FitReport::metric(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.metric == name) return m;
  throw std::out_of_range("no metric " + name);
}

MetricFit fit_metric(const std::string& name, const std::vector<double>& n,
                     const std::vector<double>& values) {
  if (n.size() != values.size()) throw PreconditionError("fit_metric: size mismatch");
  if (n.size() < 3) throw PreconditionError("fit_report needs at least 3 rows");
  MetricFit fit;
  fit.metric = name;
  fit.values = values;
  for (std::size_t i = 0; i + 1 < n.size(); ++i) {
    if (n[i] <= 0 || n[i + 1] <= n[i] || values[i] <= 0 || values[i + 1] <= 0)
      throw PreconditionError("fit_metric: sizes must be positive and increasing, values positive");
    fit.slopes.push_back(std::log(values[i + 1] / values[i]) / std::log(n[i + 1] / n[i]));
  }
  for (std::size_t i = 0; i + 1 < fit.slopes.size(); ++i)
    fit.increments.push_back(fit.slopes[i + 1] - fit.slopes[i]);

  // Slopes of e^n between the same sizes: (n1 - n0) / ln(n1 / n0).
  const std::size_t k = n.size() - 1;
  const double exp_first = (n[1] - n[0]) / std::log(n[1] / n[0]);
  const double exp_last = (n[k] - n[k - 1]) / std::log(n[k] / n[k - 1]);
  const double first = fit.slopes.front();
  const double last = fit.slopes.back();
  if (first > 0 && exp_last > exp_first)
    fit.growth_score = (last / first - 1) / (exp_last / exp_first - 1);
  fit.growth =
      fit.growth_score >= kGrowthScore ? Growth::Superpolynomial : Growth::PolynomialConsistent;
  return fit;
}

FitReport fit_report(const std::vector<ScalingRow>& rows) {
  if (rows.size() < 3) throw PreconditionError("fit_report needs at least 3 rows");
  FitReport r;
  std::vector<double> unit, logc, nodes;
  for (const auto& row : rows) {
    r.n.push_back(static_cast<double>(row.n));
    unit.push_back(static_cast<double>(row.unit_cost));
    logc.push_back(static_cast<double>(row.log_cost));
    nodes.push_back(static_cast<double>(row.oracle_nodes));
  }
  r.metrics.push_back(fit_metric("unit_cost", r.n, unit));
  r.metrics.push_back(fit_metric("log_cost", r.n, logc));
  r.metrics.push_back(fit_metric("oracle_nodes", r.n, nodes));
  return r;
}

std::string growth_name(Growth g) {
  return g == Growth::Superpolynomial ? "superpolynomial" : "polynomial-consistent";
}

nlohmann::json fit_to_json(const FitReport& r) {
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& m : r.metrics)
    metrics[m.metric] = {{"values", m.values},
                         {"slopes", m.slopes},
                         {"increments", m.increments},
                         {"growth_score", m.growth_score},
                         {"classification", growth_name(m.growth)}};
  return {{"n", r.n},
          {"growth_score_threshold", kGrowthScore},
          {"metrics", std::move(metrics)}};
}

std::string rows_to_csv(const std::vector<ScalingRow>& rows) {
  std::ostringstream out;
  out << "n,S,T,N_bits,oracle_nodes,executed,unit_cost,log_cost,wall_ms\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.S << ',' << r.T << ',' << r.N_bits << ',' << r.oracle_nodes << ','
        << r.executed << ',' << r.unit_cost << ',' << r.log_cost << ',' << fixed(r.wall_ms, 3)
        << '\n';
  return out.str();
}

std::string write_report(const std::vector<ScalingRow>& rows, const FitReport& report,
                         const ReportConfig& config, const std::string& path) {
  namespace fs = std::filesystem;
  fs::path csv(path);
  fs::path sidecar = csv;
  sidecar.replace_extension(".json");
  if (sidecar == csv) sidecar += ".json";

  nlohmann::json instances = nlohmann::json::array();
  for (const auto& r : rows)
    instances.push_back({{"n", r.n},
                         {"S", r.S},
                         {"T", r.T},
                         {"N_bits", r.N_bits},
                         {"executed_bound", r.executed_bound}});
  nlohmann::json doc = {
      {"config",
       {{"problem", config.problem},
        {"sizes", config.sizes},
        {"seed", config.seed},
        {"fuel", config.fuel},
        {"bit_budget", config.bit_budget}}},
      {"constants",
       {{"C", transpile::kBoundC},
        {"K", "8 * rules"},
        {"B", "64 * rules * (S log2 g + log2 S + 4)"},
        {"sort", {{"c1", problems::kSortC1}, {"c2", problems::kSortC2}, {"c3", problems::kSortC3}}}}},
      {"instances", std::move(instances)},
      {"fit", fit_to_json(report)}};

  std::ofstream c(csv, std::ios::binary);
  if (!c) throw std::runtime_error("cannot write " + csv.string());
  c << rows_to_csv(rows);
  std::ofstream j(sidecar, std::ios::binary);
  if (!j) throw std::runtime_error("cannot write " + sidecar.string());
  j << doc.dump(2) << '\n';
  if (!c || !j) throw std::runtime_error("write failed for " + csv.string());
  return sidecar.string();
}

std::vector<std::uint64_t> parse_sizes(const std::string& text) {
  auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw PreconditionError("bad size '" + s + "' in '" + text + "'");
    return std::stoull(s);
  };
  std::vector<std::uint64_t> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    auto lo = number(text.substr(0, dots));
    auto hi = number(text.substr(dots + 2));
    if (lo > hi) throw PreconditionError("empty size range '" + text + "'");
    for (auto n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(number(item));
  if (out.empty()) throw PreconditionError("no sizes given");
  return out;
}

}  // namespace mram::bench
